#include "strichartz/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace strichartz {

namespace {

// FFTW planning is not thread safe, execution on fresh arrays is. Plans are
// created once per (size, sign) under a lock and reused with fftw_execute_dft.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        auto* buf = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                       sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        if (!p) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& kv : plans_) fftw_destroy_plan(kv.second);
    }

private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void dft_inplace(cplx* data, std::size_t n, int sign) {
    if (n == 0) return;
    fftw_plan p = cache().get(n, sign);
    auto* d = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(p, d, d);
}

void dft_inplace(cvec& data, int sign) { dft_inplace(data.data(), data.size(), sign); }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace strichartz
