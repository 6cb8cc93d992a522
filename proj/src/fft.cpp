#include "fft.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace tnls::detail {
namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::pair<int, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [k, p] : plans) fftw_destroy_plan(p);
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(n, sign);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::size_t total = static_cast<std::size_t>(n) * n * n;
        auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
        fftw_plan p = fftw_plan_dft_3d(n, n, n, scratch, scratch, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                       FFTW_ESTIMATE);
        fftw_free(scratch);
        if (!p) throw std::runtime_error("fftw planning failed");
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

}  // namespace

void fft3d(cplx* data, int n, int sign) {
    auto* raw = reinterpret_cast<fftw_complex*>(data);
    if (fftw_alignment_of(reinterpret_cast<double*>(raw)) != 0)
        throw std::logic_error("fft3d requires an fftw_malloc aligned buffer");
    fftw_execute_dft(cache().get(n, sign), raw, raw);
}

}  // namespace tnls::detail
