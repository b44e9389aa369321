#include "mns/trajectory.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mns {

void Trajectory::append(double t, SpectralField u) { append(t, std::move(u), StepRecord{}); }

void Trajectory::append(double t, SpectralField u, StepRecord rec) {
    if (times_.empty()) {
        if (t != 0.0) throw std::invalid_argument("trajectory: first time must be 0");
    } else if (t <= times_.back()) {
        throw std::invalid_argument("trajectory: times must be strictly increasing");
    }
    rec.t = t;
    times_.push_back(t);
    fields_.push_back(std::move(u));
    records_.push_back(std::move(rec));
}

bool Trajectory::covers(double a, double b) const {
    if (empty()) return false;
    const double tol = 1e-12 * std::max(1.0, std::abs(b));
    return times_.front() <= a + tol && times_.back() >= b - tol;
}

SpectralField Trajectory::evaluate(double t) const {
    if (empty()) throw std::invalid_argument("trajectory: evaluate on empty trajectory");
    const double tol = 1e-12 * std::max(1.0, std::abs(t));
    if (t < times_.front() - tol || t > times_.back() + tol)
        throw std::invalid_argument("trajectory: coverage gap at requested time");
    if (t <= times_.front()) return fields_.front();
    if (t >= times_.back()) return fields_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double theta = (t - times_[lo]) / (times_[hi] - times_[lo]);
    SpectralField out = fields_[lo];
    out *= (1.0 - theta);
    out.axpy(theta, fields_[hi]);
    return out;
}

namespace {

constexpr char kMagic[4] = {'M', 'N', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

} // namespace

void Trajectory::save(const std::string& path, int stride) const {
    if (stride < 1) throw std::invalid_argument("trajectory.save: stride must be >= 1");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("trajectory.save: cannot open " + path);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < size(); i += static_cast<std::size_t>(stride)) keep.push_back(i);
    if (!empty() && keep.back() != size() - 1) keep.push_back(size() - 1);

    const Grid& g = fields_.front().grid();
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
    put<double>(os, g.box_scale());
    put<double>(os, g.dealias_fraction());
    put<std::uint32_t>(os, fields_.front().real_valued() ? 1u : 0u);
    put<std::uint64_t>(os, static_cast<std::uint64_t>(keep.size()));
    for (std::size_t i : keep) {
        const StepRecord& r = records_[i];
        put<double>(os, times_[i]);
        put<double>(os, r.dt);
        put<double>(os, r.omega);
        put<double>(os, r.energy);
        put<double>(os, r.dissipation);
        put<double>(os, r.support_xi1);
        put<std::uint32_t>(os, static_cast<std::uint32_t>(r.lp.size()));
        for (const auto& [p, v] : r.lp) {
            put<double>(os, p);
            put<double>(os, v);
        }
        for (int a = 0; a < g.dim(); ++a) {
            const auto& c = fields_[i].component(a);
            os.write(reinterpret_cast<const char*>(c.data()),
                     static_cast<std::streamsize>(c.size() * sizeof(cplx)));
        }
    }
    if (!os) throw std::runtime_error("trajectory.save: write failed for " + path);
}

Trajectory Trajectory::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("trajectory.load: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("trajectory.load: bad magic in " + path);
    if (get<std::uint32_t>(is) != kVersion)
        throw std::runtime_error("trajectory.load: unsupported version in " + path);
    const auto d = get<std::uint32_t>(is);
    const auto n = get<std::uint32_t>(is);
    const double lambda = get<double>(is);
    const double dealias = get<double>(is);
    const auto flags = get<std::uint32_t>(is);
    const auto count = get<std::uint64_t>(is);
    Grid grid(static_cast<int>(d), static_cast<int>(n), lambda, dealias);
    Trajectory traj;
    for (std::uint64_t i = 0; i < count; ++i) {
        StepRecord rec;
        const double t = get<double>(is);
        rec.dt = get<double>(is);
        rec.omega = get<double>(is);
        rec.energy = get<double>(is);
        rec.dissipation = get<double>(is);
        rec.support_xi1 = get<double>(is);
        const auto nlp = get<std::uint32_t>(is);
        for (std::uint32_t m = 0; m < nlp; ++m) {
            const double p = get<double>(is);
            const double v = get<double>(is);
            rec.lp.emplace_back(p, v);
        }
        SpectralField f(grid, (flags & 1u) != 0);
        for (int a = 0; a < static_cast<int>(d); ++a) {
            auto& c = f.component(a);
            is.read(reinterpret_cast<char*>(c.data()),
                    static_cast<std::streamsize>(c.size() * sizeof(cplx)));
        }
        if (!is) throw std::runtime_error("trajectory.load: truncated file " + path);
        traj.append(t, std::move(f), std::move(rec));
    }
    return traj;
}

TensorField::TensorField(Grid g) : grid(g) {
    for (int a = 0; a < grid.dim(); ++a)
        for (int b = 0; b < grid.dim(); ++b) at(a, b).assign(grid.size(), cplx(0.0, 0.0));
}

void TensorTrajectory::append(double t, TensorField f) {
    if (!times_.empty() && t <= times_.back())
        throw std::invalid_argument("tensor trajectory: times must be strictly increasing");
    times_.push_back(t);
    fields_.push_back(std::move(f));
}

bool TensorTrajectory::covers(double a, double b) const {
    if (times_.empty()) return false;
    const double tol = 1e-12 * std::max(1.0, std::abs(b));
    return times_.front() <= a + tol && times_.back() >= b - tol;
}

TensorField TensorTrajectory::evaluate(double t) const {
    if (times_.empty()) throw std::invalid_argument("tensor trajectory: empty");
    if (t <= times_.front()) return fields_.front();
    if (t >= times_.back()) return fields_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    const std::size_t lo = hi - 1;
    const double theta = (t - times_[lo]) / (times_[hi] - times_[lo]);
    TensorField out = fields_[lo];
    const Grid& g = out.grid;
    for (int a = 0; a < g.dim(); ++a)
        for (int b = 0; b < g.dim(); ++b) {
            auto& c = out.at(a, b);
            const auto& d = fields_[hi].at(a, b);
            for (std::size_t i = 0; i < c.size(); ++i)
                c[i] = (1.0 - theta) * c[i] + theta * d[i];
        }
    return out;
}

} // namespace mns
