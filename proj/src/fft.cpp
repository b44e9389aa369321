//==============================================================================
// fft.cpp
// FFTW backend for the periodic lattice. Plans are created once per (d, N,
// direction) with FFTW_ESTIMATE | FFTW_UNALIGNED and reused via the new-array
// execute interface, so callers may pass any buffer. The planner itself is
// not thread-safe and is guarded by a mutex; execution is lock-free.
//==============================================================================

#include "mns/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace mns::fft {

namespace {

struct PlanKey {
    int dim;
    int n;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (dim != o.dim) return dim < o.dim;
        if (n != o.n) return n < o.n;
        return sign < o.sign;
    }
};

std::mutex planner_mutex;
std::map<PlanKey, fftw_plan>& plan_cache() {
    static std::map<PlanKey, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(const Grid& grid, int sign, fftw_complex* buf) {
    const PlanKey key{grid.dim(), grid.n(), sign};
    std::lock_guard<std::mutex> lock(planner_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    int dims[3] = {grid.n(), grid.n(), grid.n()};
    fftw_plan plan = fftw_plan_dft(grid.dim(), dims, buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache.emplace(key, plan);
    return plan;
}

void execute(const Grid& grid, int sign, cplx* data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan = get_plan(grid, sign, buf);
    fftw_execute_dft(plan, buf, buf);
}

} // namespace

void forward(const Grid& grid, cplx* data) {
    execute(grid, FFTW_FORWARD, data);
    const double scale = 1.0 / static_cast<double>(grid.size());
    const std::size_t m = grid.size();
    for (std::size_t i = 0; i < m; ++i) data[i] *= scale;
}

void backward(const Grid& grid, cplx* data) { execute(grid, FFTW_BACKWARD, data); }

void forward(const Grid& grid, std::vector<cplx>& data) { forward(grid, data.data()); }
void backward(const Grid& grid, std::vector<cplx>& data) { backward(grid, data.data()); }

} // namespace mns::fft
