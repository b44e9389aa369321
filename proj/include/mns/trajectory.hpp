#pragma once

#include "mns/field.hpp"

#include <optional>
#include <vector>

namespace mns {

/// Per-step bookkeeping carried alongside the stored fields.
struct StepRecord {
    double t = 0.0;
    double dt = 0.0;
    double omega = 0.0; // sup |u|
    std::vector<std::pair<double, double>> lp; // (p, |u|_p) for configured p
    double energy = 0.0;             // 1/2 |u|_2^2
    double dissipation = 0.0;        // int_0^t |grad u|_2^2 accumulated
    double support_xi1 = 0.0;        // half-space support statistic, when tracked
};

/// Time-indexed sequence of spectral fields with strictly increasing times
/// starting at 0, plus per-step records. Evaluation between nodes is
/// piecewise-linear in the spectral coefficients.
class Trajectory {
public:
    Trajectory() = default;

    void append(double t, SpectralField u);
    void append(double t, SpectralField u, StepRecord rec);

    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }
    double time(std::size_t i) const { return times_[i]; }
    double last_time() const { return times_.back(); }
    const std::vector<double>& times() const { return times_; }
    const SpectralField& field(std::size_t i) const { return fields_[i]; }
    SpectralField& field(std::size_t i) { return fields_[i]; }
    const StepRecord& record(std::size_t i) const { return records_[i]; }
    StepRecord& record(std::size_t i) { return records_[i]; }
    const std::vector<StepRecord>& records() const { return records_; }

    bool covers(double a, double b) const;
    /// Piecewise-linear interpolation of coefficients; throws when t lies
    /// outside the covered interval (coverage gap).
    SpectralField evaluate(double t) const;

    /// MNST container: every stride-th snapshot (records always included).
    void save(const std::string& path, int stride = 1) const;
    static Trajectory load(const std::string& path);

private:
    std::vector<double> times_;
    std::vector<SpectralField> fields_;
    std::vector<StepRecord> records_;
};

/// d x d matrix-valued field (forcing tensors), components row-major.
struct TensorField {
    Grid grid;
    std::array<std::vector<cplx>, 9> comp;

    explicit TensorField(Grid g);
    std::vector<cplx>& at(int a, int b) { return comp[static_cast<std::size_t>(a * 3 + b)]; }
    const std::vector<cplx>& at(int a, int b) const {
        return comp[static_cast<std::size_t>(a * 3 + b)];
    }
};

/// Time-indexed tensor fields with linear interpolation.
class TensorTrajectory {
public:
    void append(double t, TensorField f);
    bool empty() const { return times_.empty(); }
    bool covers(double a, double b) const;
    TensorField evaluate(double t) const;

private:
    std::vector<double> times_;
    std::vector<TensorField> fields_;
};

} // namespace mns
