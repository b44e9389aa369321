#include "mns/field.hpp"

#include "mns/fft.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace mns {

SpectralField::SpectralField(Grid grid, bool real_valued)
    : grid_(grid), real_valued_(real_valued) {
    for (int a = 0; a < grid_.dim(); ++a)
        comp_[static_cast<std::size_t>(a)].assign(grid_.size(), cplx(0.0, 0.0));
}

void SpectralField::set_zero() {
    for (int a = 0; a < dim(); ++a)
        std::fill(component(a).begin(), component(a).end(), cplx(0.0, 0.0));
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "field +=");
    for (int a = 0; a < dim(); ++a) {
        auto& c = component(a);
        const auto& d = o.component(a);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
    }
    real_valued_ = real_valued_ && o.real_valued_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "field -=");
    for (int a = 0; a < dim(); ++a) {
        auto& c = component(a);
        const auto& d = o.component(a);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= d[i];
    }
    real_valued_ = real_valued_ && o.real_valued_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (int a = 0; a < dim(); ++a)
        for (auto& v : component(a)) v *= s;
    return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
    for (int a = 0; a < dim(); ++a)
        for (auto& v : component(a)) v *= s;
    if (s.imag() != 0.0) real_valued_ = false;
    return *this;
}

void SpectralField::axpy(double alpha, const SpectralField& x) {
    require_same_grid(grid_, x.grid_, "field axpy");
    for (int a = 0; a < dim(); ++a) {
        auto& c = component(a);
        const auto& d = x.component(a);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += alpha * d[i];
    }
    real_valued_ = real_valued_ && x.real_valued_;
}

namespace {

// Flat index of the mirrored mode -k, built from per-axis mirrors.
std::size_t mirror_flat(const Grid& g, std::size_t idx) {
    const int n = g.n();
    if (g.dim() == 2) {
        const int i1 = static_cast<int>(idx) / n;
        const int i2 = static_cast<int>(idx) % n;
        return static_cast<std::size_t>(g.mirror_index(i1)) * n + g.mirror_index(i2);
    }
    const int i3 = static_cast<int>(idx % static_cast<std::size_t>(n));
    const std::size_t r = idx / static_cast<std::size_t>(n);
    const int i2 = static_cast<int>(r % static_cast<std::size_t>(n));
    const int i1 = static_cast<int>(r / static_cast<std::size_t>(n));
    return (static_cast<std::size_t>(g.mirror_index(i1)) * n + g.mirror_index(i2)) * n +
           g.mirror_index(i3);
}

} // namespace

void SpectralField::symmetrize() {
    for (int a = 0; a < dim(); ++a) {
        auto& c = component(a);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::size_t m = mirror_flat(grid_, i);
            if (m < i) continue;
            if (m == i) {
                c[i] = cplx(c[i].real(), 0.0);
            } else {
                const cplx avg = 0.5 * (c[i] + std::conj(c[m]));
                c[i] = avg;
                c[m] = std::conj(avg);
            }
        }
    }
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0;
    for (int a = 0; a < dim(); ++a) {
        const auto& c = component(a);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::size_t m = mirror_flat(grid_, i);
            if (m < i) continue;
            worst = std::max(worst, std::abs(c[i] - std::conj(c[m])));
        }
    }
    return worst;
}

double SpectralField::max_abs_coeff() const {
    double worst = 0.0;
    for (int a = 0; a < dim(); ++a)
        for (const auto& v : component(a)) worst = std::max(worst, std::abs(v));
    return worst;
}

double SpectralField::spectral_mass() const {
    double s = 0.0;
    for (int a = 0; a < dim(); ++a)
        for (const auto& v : component(a)) s += std::norm(v);
    return s;
}

double SpectralField::l2_norm() const {
    double box = 1.0;
    for (int a = 0; a < dim(); ++a) box *= grid_.box_length();
    return std::sqrt(box * spectral_mass());
}

double SpectralField::divergence_max() const {
    const double inv_lambda = 1.0 / grid_.box_scale();
    double worst = 0.0;
    for_each_mode(grid_, [&](std::size_t idx, int k1, int k2, int k3) {
        if (k1 == 0 && k2 == 0 && k3 == 0) return;
        cplx div = cplx(0.0, 0.0);
        div += static_cast<double>(k1) * inv_lambda * comp_[0][idx];
        div += static_cast<double>(k2) * inv_lambda * comp_[1][idx];
        if (grid_.dim() == 3) div += static_cast<double>(k3) * inv_lambda * comp_[2][idx];
        worst = std::max(worst, std::abs(div));
    });
    return worst;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField f) { return f *= s; }

double PhysicalField::magnitude(std::size_t idx) const {
    double m2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) m2 += std::norm(comp[static_cast<std::size_t>(a)][idx]);
    return std::sqrt(m2);
}

PhysicalField to_physical(const SpectralField& f) {
    if (f.real_valued()) {
        const double scale = std::max(f.max_abs_coeff(), 1e-300);
        if (f.hermitian_defect() > 1e-12 * scale)
            throw std::invalid_argument(
                "to_physical: field flagged real violates Hermitian symmetry");
    }
    PhysicalField out{f.grid(), f.real_valued(), {}};
    for (int a = 0; a < f.dim(); ++a) {
        out.component(a) = f.component(a);
        fft::backward(f.grid(), out.component(a));
    }
    return out;
}

SpectralField to_spectral(const PhysicalField& samples) {
    SpectralField out(samples.grid, samples.real_valued);
    for (int a = 0; a < samples.grid.dim(); ++a) {
        out.component(a) = samples.component(a);
        fft::forward(samples.grid, out.component(a));
    }
    if (out.real_valued()) out.symmetrize();
    return out;
}

namespace {

constexpr char kMagic[4] = {'M', 'N', 'S', 'F'};
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

void save_field(const SpectralField& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_field: cannot open " + path);
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.dim()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid().n()));
    put<double>(os, f.grid().box_scale());
    put<double>(os, f.grid().dealias_fraction());
    put<std::uint32_t>(os, f.real_valued() ? 1u : 0u);
    for (int a = 0; a < f.dim(); ++a) {
        const auto& c = f.component(a);
        os.write(reinterpret_cast<const char*>(c.data()),
                 static_cast<std::streamsize>(c.size() * sizeof(cplx)));
    }
    if (!os) throw std::runtime_error("save_field: write failed for " + path);
}

SpectralField load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_field: cannot open " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("load_field: bad magic in " + path);
    const auto version = get<std::uint32_t>(is);
    if (version != kVersion)
        throw std::runtime_error("load_field: unsupported version in " + path);
    const auto d = get<std::uint32_t>(is);
    const auto n = get<std::uint32_t>(is);
    const double lambda = get<double>(is);
    const double dealias = get<double>(is);
    const auto flags = get<std::uint32_t>(is);
    Grid grid(static_cast<int>(d), static_cast<int>(n), lambda, dealias);
    SpectralField f(grid, (flags & 1u) != 0);
    for (int a = 0; a < f.dim(); ++a) {
        auto& c = f.component(a);
        is.read(reinterpret_cast<char*>(c.data()),
                static_cast<std::streamsize>(c.size() * sizeof(cplx)));
    }
    if (!is) throw std::runtime_error("load_field: truncated file " + path);
    return f;
}

void write_physical_csv(const SpectralField& f, const std::string& path) {
    const PhysicalField phys = to_physical(f);
    const Grid& g = f.grid();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_physical_csv: cannot open " + path);
    for (int a = 0; a < g.dim(); ++a) os << "x" << a + 1 << ",";
    for (int a = 0; a < g.dim(); ++a) {
        os << "u" << a + 1;
        if (!f.real_valued()) os << "_re,u" << a + 1 << "_im";
        if (a + 1 < g.dim()) os << ",";
    }
    os << "\n";
    const int n = g.n();
    const double h = g.spacing();
    char buf[64];
    std::size_t idx = 0;
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };
    auto row = [&](int i1, int i2, int i3) {
        emit(i1 * h);
        os << ",";
        emit(i2 * h);
        os << ",";
        if (g.dim() == 3) {
            emit(i3 * h);
            os << ",";
        }
        for (int a = 0; a < g.dim(); ++a) {
            const cplx v = phys.component(a)[idx];
            emit(v.real());
            if (!f.real_valued()) {
                os << ",";
                emit(v.imag());
            }
            if (a + 1 < g.dim()) os << ",";
        }
        os << "\n";
        ++idx;
    };
    if (g.dim() == 2) {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) row(i1, i2, 0);
    } else {
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) row(i1, i2, i3);
    }
}

} // namespace mns
