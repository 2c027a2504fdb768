#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace shc {

using Complex = std::complex<double>;
using ComplexVec = std::vector<Complex>;
using Bits = std::vector<std::uint8_t>;

// Error taxonomy. Every failure the library reports derives from Error so
// callers (the CLI in particular) can map them to one machine-readable line.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InputLengthError : Error {
    explicit InputLengthError(const std::string& w) : Error("input-length", w) {}
};
struct ParameterError : Error {
    explicit ParameterError(const std::string& w) : Error("parameter", w) {}
};
struct ConfigurationError : Error {
    explicit ConfigurationError(const std::string& w) : Error("configuration", w) {}
};
struct SyncError : Error {
    explicit SyncError(const std::string& w) : Error("sync-failure", w) {}
};
struct DivergenceError : Error {
    explicit DivergenceError(const std::string& w) : Error("divergence", w) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error("domain", w) {}
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

}  // namespace shc
