// Copyright (c) the spectral-count contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spectral/eigen.hpp"
#include "spectral/matrix.hpp"

namespace spectral {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo < x && x < hi; }
    /// closure of [other.lo, other.hi] strictly inside the open interval
    bool compactly_contains(const Interval& other) const {
        return lo < other.lo && other.lo < other.hi && other.hi < hi;
    }
};

/// Evaluatable family lambda -> (F(lambda), M) of Hermitian pairs with M
/// positive definite, on an open parameter interval. Immutable; evaluations
/// at distinct lambda are independent.
class PencilModel {
public:
    struct Evaluation {
        HermitianMatrix f;
        HermitianMatrix m;
    };
    using FormFn = std::function<Evaluation(double)>;
    using FormDerivativeFn = std::function<HermitianMatrix(double)>;

    enum class Provenance { Abstract, Differential };

    /// Diagnostics recorded at model-construction time.
    struct Flags {
        bool rank_constant = true;
        bool kernel_constant = true;
        bool derivative_consistent = true;
        std::vector<std::string> warnings;
    };

    PencilModel(Interval lambda_interval, std::size_t dimension, FormFn form,
                FormDerivativeFn derivative, Provenance provenance, Flags flags);
    PencilModel(Interval lambda_interval, std::size_t dimension, FormFn form,
                FormDerivativeFn derivative, Provenance provenance);

    /// F(lambda) = sum_j lambda^j coeffs[j] with constant mass (identity when
    /// omitted); the derivative family is attached automatically.
    static PencilModel polynomial_family(std::vector<HermitianMatrix> coeffs,
                                         std::optional<HermitianMatrix> mass,
                                         Interval lambda_interval);

    const Interval& lambda_interval() const { return lambda_interval_; }
    std::size_t dimension() const { return dimension_; }
    bool has_derivative() const { return static_cast<bool>(derivative_); }
    Provenance provenance() const { return provenance_; }
    const Flags& flags() const { return flags_; }

    Evaluation eval_form(double lambda) const;
    HermitianMatrix eval_form_derivative(double lambda) const;

    /// Sorted pencil eigenvalues at one parameter value.
    std::vector<double> branch_values(double lambda) const;

private:
    Interval lambda_interval_;
    std::size_t dimension_ = 0;
    FormFn form_;
    FormDerivativeFn derivative_;
    Provenance provenance_ = Provenance::Abstract;
    Flags flags_;
};

/// nu at one parameter value: inertia of the pencil (F(lambda), M). A
/// nonzero zero-band count means lambda sits on (or numerically at) an
/// eigenvalue of the family.
Inertia nu(const PencilModel& model, double lambda, double zero_tol = 1e-7);

/// Sampled sorted eigenvalue branches over a grid; branches[m] is the
/// (m+1)-th branch. continuity_modulus[m] = max_j |value jump| between
/// neighbouring grid points.
struct BranchTable {
    std::vector<double> lambda_grid;
    std::vector<std::vector<double>> branches;
    std::vector<double> continuity_modulus;
};

BranchTable branch_table(const PencilModel& model, const std::vector<double>& lambda_grid,
                         std::size_t m_max);

struct LocatedEigenvalue {
    double lambda0 = 0.0;
    std::size_t multiplicity = 0;
    std::vector<std::size_t> branch_indices;  // 1-based branch numbers that vanish
    Matrix eigenvectors;                      // M-orthonormal numerical kernel basis
    double refined_width = 0.0;
    bool width_flagged = false;      // bisection budget exhausted
    bool endpoint_ambiguous = false; // within cluster tolerance of an endpoint
};

struct LocateOptions {
    double grid_step = 0.0;    // 0: interval length / 64
    double zero_tol = 1e-7;    // zero band, relative to branch scale
    double cluster_tol = 1e-6; // scaled by (1 + |lambda|)
    int max_bisect = 200;
};

/// Scans branch sign changes (and zero-band tangencies) over [xi1, xi2) and
/// refines each root by bisection to width 1e-10*(1+|lambda|). Roots closer
/// than the cluster tolerance merge; multiplicity is the number of pencil
/// eigenvalues inside the zero band at the refined point. The half-open
/// convention is decided by the refined position.
std::vector<LocatedEigenvalue> locate_eigenvalues(const PencilModel& model, Interval half_open,
                                                  const LocateOptions& options = {});

enum class VerdictStatus { Pass, Fail, HypothesisFailed, NotApplicable };

struct TheoremVerdict {
    VerdictStatus status = VerdictStatus::NotApplicable;
    std::string detail;

    bool passed() const { return status == VerdictStatus::Pass; }
};

std::string to_string(VerdictStatus s);

/// Positive-definiteness certificate for F(lambda1) - F(lambda2) over
/// consecutive sample pairs; refuted with a witness vector (eigenvector of
/// the most negative eigenvalue) when some difference is not positive.
struct MonotoneCheck {
    bool certified = false;
    std::size_t pairs_checked = 0;
    double lambda1 = 0.0, lambda2 = 0.0;   // refuting pair when not certified
    double min_eigenvalue = 0.0;
    std::vector<Complex> witness;
    std::string detail;
};

MonotoneCheck check_monotone(const PencilModel& model, const std::vector<double>& samples,
                             const std::vector<std::vector<Complex>>* probe_vectors = nullptr);

/// Sign test of the form derivative on the numerical kernel at a located
/// eigenvalue: pass iff y* F'(lambda0) y < -tol for every kernel direction
/// (and 8 random unit combinations when the kernel is multidimensional).
struct NegativeTypeCheck {
    bool applicable = false;
    bool pass = false;
    double worst_value = 0.0;
    std::string detail;
};

NegativeTypeCheck check_negative_type(const PencilModel& model, const LocatedEigenvalue& located,
                                      double type_tol_rel = 1e-9);

struct CountReport {
    Interval interval;
    std::size_t eigenvalue_count = 0;  // N, counted with multiplicity
    Inertia nu_lo, nu_hi;
    std::vector<LocatedEigenvalue> located;
    TheoremVerdict lower_bound;             // N >= nu(xi2) - nu(xi1)
    TheoremVerdict monotone_equality;       // N == dnu under form monotonicity
    TheoremVerdict negative_type_equality;  // N == dnu under the derivative sign test
    bool endpoint_on_eigenvalue = false;
    std::size_t count_excluding_endpoints = 0;
    std::size_t count_including_endpoints = 0;
    std::vector<std::string> caveats;

    long delta_nu() const {
        return static_cast<long>(nu_hi.negative) - static_cast<long>(nu_lo.negative);
    }
};

struct ReportOptions {
    LocateOptions locate;
    std::size_t monotone_samples = 9;
};

CountReport count_report(const PencilModel& model, Interval half_open,
                         const ReportOptions& options = {});

}  // namespace spectral
