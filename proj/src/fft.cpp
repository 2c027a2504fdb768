#include "shc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace shc::fft {
namespace {

// The FFTW planner is not thread-safe; plans are created once per
// (size, direction) under a lock and executed with the new-array interface,
// which is safe to call concurrently.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mu_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        // In-place plan: execution below always runs in place.
        auto* buf = fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void execute(ComplexVec& buf, int sign) {
    if (buf.empty()) return;
    auto plan = cache().get(buf.size(), sign);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace

void forward_inplace(ComplexVec& x) { execute(x, FFTW_FORWARD); }

void inverse_inplace(ComplexVec& x) {
    execute(x, FFTW_BACKWARD);
    const double scale = x.empty() ? 1.0 : 1.0 / static_cast<double>(x.size());
    for (auto& v : x) v *= scale;
}

ComplexVec forward(std::span<const Complex> x) {
    ComplexVec out(x.begin(), x.end());
    forward_inplace(out);
    return out;
}

ComplexVec inverse(std::span<const Complex> X) {
    ComplexVec out(X.begin(), X.end());
    inverse_inplace(out);
    return out;
}

double bin_frequency(std::size_t k, std::size_t n, double sample_rate) {
    const auto half = n / 2;
    const double idx = k < (n - half) ? static_cast<double>(k)
                                      : static_cast<double>(k) - static_cast<double>(n);
    return idx * sample_rate / static_cast<double>(n);
}

}  // namespace shc::fft
