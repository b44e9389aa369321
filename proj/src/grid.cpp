#include "mns/grid.hpp"

#include <cmath>

namespace mns {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

Grid::Grid(int dim, int points_per_axis, double box_scale, double dealias_fraction)
    : dim_(dim), n_(points_per_axis), lambda_(box_scale), dealias_(dealias_fraction) {
    if (dim_ != 2 && dim_ != 3)
        throw std::invalid_argument("grid.d: must be 2 or 3, got " + std::to_string(dim_));
    if (n_ < 8 || !is_power_of_two(n_))
        throw std::invalid_argument("grid.N: must be a power of two >= 8, got " +
                                    std::to_string(n_));
    if (!(lambda_ > 0.0))
        throw std::invalid_argument("grid.lambda: must be positive");
    if (!(dealias_ > 0.0) || dealias_ > 1.0)
        throw std::invalid_argument("grid.dealias: must lie in (0, 1]");
    dealias_band_ = static_cast<int>(std::floor(dealias_ * (n_ / 2)));
    size_ = 1;
    for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
}

double Grid::box_length() const { return 2.0 * M_PI * lambda_; }

double Grid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing();
    return v;
}

int Grid::default_j_min() const {
    return static_cast<int>(std::ceil(std::log2(1.0 / lambda_))) - 1;
}

int Grid::default_j_max() const {
    return static_cast<int>(std::lround(std::log2(n_ / 2.0))) - 1;
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (a != b)
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

} // namespace mns
