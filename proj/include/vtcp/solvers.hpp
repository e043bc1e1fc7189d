#pragma once

// VTCP residual, the three solution methods (semismooth Newton, homotopy,
// M-tensor active-set), the grid oracle, and the right-inverse reformulation.

#include "vtcp/classes.hpp"
#include "vtcp/errors.hpp"
#include "vtcp/products.hpp"
#include "vtcp/search.hpp"
#include "vtcp/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vtcp {

/// One VTCP: find x with q1 + A1x^{m-1} >= 0, q2 + A2x^{m-1} >= 0, orthogonal.
class VtcpInstance {
public:
    VtcpInstance(TensorPair pair, Vector q1, Vector q2)
        : pair_(std::move(pair)), q1_(std::move(q1)), q2_(std::move(q2)) {
        if (q1_.size() != pair_.dim() || q2_.size() != pair_.dim())
            throw DimensionError("VtcpInstance: q1 and q2 must have the pair dimension");
        detail::require_finite(q1_, "q1");
        detail::require_finite(q2_, "q2");
    }

    [[nodiscard]] const TensorPair& pair() const noexcept { return pair_; }
    [[nodiscard]] const DenseTensor& a1() const noexcept { return pair_.a1(); }
    [[nodiscard]] const DenseTensor& a2() const noexcept { return pair_.a2(); }
    [[nodiscard]] const Vector& q1() const noexcept { return q1_; }
    [[nodiscard]] const Vector& q2() const noexcept { return q2_; }
    [[nodiscard]] std::size_t dim() const noexcept { return pair_.dim(); }
    [[nodiscard]] std::size_t order() const noexcept { return pair_.order(); }

    friend bool operator==(const VtcpInstance&, const VtcpInstance&) = default;

private:
    TensorPair pair_;
    Vector q1_;
    Vector q2_;
};

struct SolverConfig {
    double tol_residual = 1e-10;
    int max_iters = 200;
    double shrink = 0.5;
    int max_backtracks = 30;
    int homotopy_steps = 50;
    double min_homotopy_step = 1e-10;
    double oracle_radius = 5.0;
    int oracle_points = 201;
    int multistart = 100;
    std::uint64_t seed = 0;
    int max_inner_iters = 20000;  ///< Jacobi sweeps inside mtensor_system_solve
    double dedup_tol = 1e-6;
    std::size_t oracle_max_candidates = 4000;

    void validate() const {
        if (!(tol_residual > 0.0) || max_iters <= 0 || !(shrink > 0.0 && shrink < 1.0) || max_backtracks <= 0 ||
            homotopy_steps <= 0 || !(min_homotopy_step > 0.0) || !(oracle_radius > 0.0) || oracle_points < 2 ||
            multistart <= 0 || max_inner_iters <= 0 || !(dedup_tol > 0.0) || oracle_max_candidates == 0)
            throw InvalidArgument("SolverConfig: all parameters must be positive (shrink in (0,1))");
    }
};

enum class SolveStatus { Converged, MaxIters, Diverged, PreconditionFailed };
enum class SolveMethod { Newton, Homotopy, MTensor, Oracle };

inline std::string_view to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max-iters";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::PreconditionFailed: return "precondition-failed";
    }
    return "?";
}

inline std::string_view to_string(SolveMethod m) {
    switch (m) {
    case SolveMethod::Newton: return "newton";
    case SolveMethod::Homotopy: return "homotopy";
    case SolveMethod::MTensor: return "mtensor";
    case SolveMethod::Oracle: return "oracle";
    }
    return "?";
}

inline SolveMethod parse_solve_method(std::string_view s) {
    if (s == "newton") return SolveMethod::Newton;
    if (s == "homotopy") return SolveMethod::Homotopy;
    if (s == "mtensor") return SolveMethod::MTensor;
    if (s == "oracle") return SolveMethod::Oracle;
    throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

struct SolveReport {
    SolveMethod method = SolveMethod::Newton;
    SolveStatus status = SolveStatus::MaxIters;
    Vector x;
    double residual_inf_norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<double> trace;                ///< residual norm per iteration
    std::vector<double> homotopy_t;           ///< accepted path parameters
    std::vector<std::vector<int>> active_sets; ///< mtensor: 1 or 2 per component
    std::vector<Vector> iterates;             ///< mtensor: outer iterates
    std::vector<std::string> warnings;

    [[nodiscard]] bool converged() const noexcept { return status == SolveStatus::Converged; }
};

// ---------------------------------------------------------------------------
// Residual and its generalized Jacobian
// ---------------------------------------------------------------------------

inline Vector image1(const VtcpInstance& inst, std::span<const double> x) {
    return axpy(1.0, inst.q1(), power_apply(inst.a1(), x));
}

inline Vector image2(const VtcpInstance& inst, std::span<const double> x) {
    return axpy(1.0, inst.q2(), power_apply(inst.a2(), x));
}

/// min(q1 + A1x^{m-1}, q2 + A2x^{m-1}); zero exactly at VTCP solutions.
inline Vector residual(const VtcpInstance& inst, std::span<const double> x) {
    return vmin(image1(inst, x), image2(inst, x));
}

struct ResidualJacobian {
    Matrix jacobian;
    Vector d1; ///< 1 where branch 1 attains the min (ties included), else 0
    Vector d2; ///< 1 - d1
};

inline ResidualJacobian residual_jacobian(const VtcpInstance& inst, std::span<const double> x) {
    const Vector f1 = image1(inst, x);
    const Vector f2 = image2(inst, x);
    const Matrix j1 = power_jacobian(inst.a1(), x);
    const Matrix j2 = power_jacobian(inst.a2(), x);
    const std::size_t n = x.size();
    ResidualJacobian r{Matrix(j1.rows(), j1.cols()), Vector(n), Vector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const bool first = f1[i] <= f2[i];
        r.d1[i] = first ? 1.0 : 0.0;
        r.d2[i] = first ? 0.0 : 1.0;
        r.jacobian.row(static_cast<Eigen::Index>(i)) = first ? j1.row(static_cast<Eigen::Index>(i))
                                                             : j2.row(static_cast<Eigen::Index>(i));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Semismooth Newton core
// ---------------------------------------------------------------------------

namespace detail {

inline Eigen::VectorXd to_eigen(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

/// Solve J d = rhs; on a singular J retry with J + λI, λ = 1e-8(1 + ‖J‖∞)
/// doubled up to 5 times.
inline std::optional<Vector> newton_step(const Matrix& j, const Vector& rhs) {
    const Eigen::VectorXd b = to_eigen(rhs);
    auto attempt = [&](const Matrix& m) -> std::optional<Vector> {
        Eigen::FullPivLU<Matrix> lu(m);
        if (!lu.isInvertible())
            return std::nullopt;
        Eigen::VectorXd d = lu.solve(b);
        if (!d.allFinite())
            return std::nullopt;
        return Vector(d.data(), d.data() + d.size());
    };
    if (auto d = attempt(j))
        return d;
    const double norm = j.cwiseAbs().rowwise().sum().maxCoeff();
    double lambda = 1e-8 * (1.0 + (std::isfinite(norm) ? norm : 0.0));
    const Matrix eye = Matrix::Identity(j.rows(), j.cols());
    for (int k = 0; k <= 5; ++k, lambda *= 2.0)
        if (auto d = attempt(j + lambda * eye))
            return d;
    return std::nullopt;
}

struct NewtonOutcome {
    Vector x;
    SolveStatus status = SolveStatus::MaxIters;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    std::vector<double> trace;
};

/// Damped semismooth Newton on F with backtracking on ‖F‖∞ (sufficient
/// decrease 1e-4). With `polish`, iteration continues past the tolerance
/// until the step is negligible, so slowly converging degenerate roots are
/// pinned down to near machine precision.
template <class F, class JF>
NewtonOutcome semismooth_newton(F&& fun, JF&& jac, Vector x, const SolverConfig& cfg, bool polish) {
    constexpr double sigma = 1e-4;
    constexpr int polish_budget = 60;
    NewtonOutcome out;
    Vector r = fun(x);
    double nr = inf_norm(r);
    if (!std::isfinite(nr)) {
        out.x = std::move(x);
        out.status = SolveStatus::Diverged;
        return out;
    }
    out.trace.push_back(nr);
    int extra = 0;
    for (int it = 0;; ++it) {
        const bool within = nr <= cfg.tol_residual;
        if (within && (!polish || nr == 0.0 || extra >= polish_budget)) {
            out.status = SolveStatus::Converged;
            break;
        }
        if (it >= cfg.max_iters) {
            out.status = within ? SolveStatus::Converged : SolveStatus::MaxIters;
            break;
        }
        auto d = newton_step(jac(x), scaled(-1.0, r));
        if (!d) {
            out.status = within ? SolveStatus::Converged : SolveStatus::Diverged;
            break;
        }
        double alpha = 1.0;
        bool accepted = false;
        Vector xt, rt;
        double nt = 0.0;
        for (int b = 0; b <= cfg.max_backtracks; ++b, alpha *= cfg.shrink) {
            xt = axpy(alpha, *d, x);
            rt = fun(xt);
            nt = inf_norm(rt);
            if (std::isfinite(nt) && nt <= (1.0 - sigma * alpha) * nr) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            out.status = within ? SolveStatus::Converged : SolveStatus::Diverged;
            break;
        }
        const double step = alpha * inf_norm(*d);
        x = std::move(xt);
        r = std::move(rt);
        nr = nt;
        out.trace.push_back(nr);
        out.iterations = it + 1;
        if (within)
            ++extra;
        if (polish && nr <= cfg.tol_residual && step <= 1e-14 * (1.0 + inf_norm(x))) {
            out.status = SolveStatus::Converged;
            break;
        }
    }
    out.x = std::move(x);
    out.residual = nr;
    return out;
}

} // namespace detail

/// Semismooth Newton on the min residual with branch-1-on-ties generalized Jacobian.
inline SolveReport solve_newton(const VtcpInstance& inst, std::span<const double> x0, const SolverConfig& cfg,
                                bool polish = false) {
    cfg.validate();
    if (x0.size() != inst.dim())
        throw DimensionError("solve_newton: start point dimension mismatch");
    auto res = detail::semismooth_newton([&](const Vector& x) { return residual(inst, x); },
                                         [&](const Vector& x) { return residual_jacobian(inst, x).jacobian; },
                                         Vector(x0.begin(), x0.end()), cfg, polish);
    SolveReport rep;
    rep.method = SolveMethod::Newton;
    rep.status = res.status;
    rep.x = std::move(res.x);
    rep.residual_inf_norm = res.residual;
    rep.iterations = res.iterations;
    rep.trace = std::move(res.trace);
    return rep;
}

/// Newton from cfg.multistart seeded starts uniform in [-radius, radius]^n;
/// start k uses substream (cfg.seed, k).
inline std::vector<SolveReport> newton_multistart(const VtcpInstance& inst, const SolverConfig& cfg, double radius) {
    std::vector<SolveReport> out;
    out.reserve(static_cast<std::size_t>(cfg.multistart));
    for (int k = 0; k < cfg.multistart; ++k) {
        auto rng = substream(cfg.seed, static_cast<std::uint64_t>(k));
        out.push_back(solve_newton(inst, uniform_vector(rng, inst.dim(), -radius, radius), cfg));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Homotopy
// ---------------------------------------------------------------------------

/// H(x,t) = min(t q1 + (1-t) x + t A1x^{m-1}, t q2 + (1-t) 1 + A2x^{m-1}).
/// H(·,0) vanishes at 0 and H(·,1) is the VTCP residual.
inline Vector homotopy_map(const VtcpInstance& inst, std::span<const double> x, double t) {
    const Vector g = power_apply(inst.a1(), x);
    const Vector f = power_apply(inst.a2(), x);
    Vector h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        h[i] = std::min(t * inst.q1()[i] + (1.0 - t) * x[i] + t * g[i], t * inst.q2()[i] + (1.0 - t) + f[i]);
    return h;
}

inline Matrix homotopy_jacobian(const VtcpInstance& inst, std::span<const double> x, double t) {
    const Vector g = power_apply(inst.a1(), x);
    const Vector f = power_apply(inst.a2(), x);
    const Matrix j1 = power_jacobian(inst.a1(), x);
    const Matrix j2 = power_jacobian(inst.a2(), x);
    Matrix j(j1.rows(), j1.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double b1 = t * inst.q1()[i] + (1.0 - t) * x[i] + t * g[i];
        const double b2 = t * inst.q2()[i] + (1.0 - t) + f[i];
        if (b1 <= b2) {
            j.row(r) = t * j1.row(r);
            j(r, r) += 1.0 - t;
        } else {
            j.row(r) = j2.row(r);
        }
    }
    return j;
}

/// Follow H from (0, 0) to t = 1 in cfg.homotopy_steps uniform steps, each
/// corrected by Newton at frozen t from the previous point; a failed
/// corrector halves the step, a success restores it up to the base step.
inline SolveReport solve_homotopy(const VtcpInstance& inst, const SolverConfig& cfg) {
    cfg.validate();
    SolveReport rep;
    rep.method = SolveMethod::Homotopy;
    const double base = 1.0 / cfg.homotopy_steps;
    double h = base;
    double t = 0.0;
    Vector x(inst.dim(), 0.0);
    rep.homotopy_t.push_back(0.0);
    while (t < 1.0) {
        const double tn = std::min(1.0, t + h);
        auto res = detail::semismooth_newton([&](const Vector& v) { return homotopy_map(inst, v, tn); },
                                             [&](const Vector& v) { return homotopy_jacobian(inst, v, tn); }, x,
                                             cfg, tn == 1.0);
        rep.iterations += res.iterations;
        if (res.status == SolveStatus::Converged) {
            x = std::move(res.x);
            t = tn;
            rep.homotopy_t.push_back(t);
            rep.trace.push_back(res.residual);
            h = std::min(base, 2.0 * h);
        } else {
            h *= 0.5;
            if (h < cfg.min_homotopy_step) {
                rep.status = SolveStatus::Diverged;
                rep.x = std::move(x);
                rep.residual_inf_norm = inf_norm(residual(inst, rep.x));
                rep.warnings.push_back("homotopy step underflow at t = " + std::to_string(t));
                return rep;
            }
        }
    }
    rep.x = std::move(x);
    rep.residual_inf_norm = inf_norm(residual(inst, rep.x));
    rep.status = rep.residual_inf_norm <= cfg.tol_residual ? SolveStatus::Converged : SolveStatus::MaxIters;
    return rep;
}

// ---------------------------------------------------------------------------
// M-tensor systems
// ---------------------------------------------------------------------------

struct MTensorSystemResult {
    Vector x;
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
    double residual = std::numeric_limits<double>::infinity(); ///< ‖Mx^{m-1} - b‖∞
};

/// Positive solution of M x^{m-1} = b for a Z-tensor M with positive
/// diagonal and b > 0. Jacobi sweeps on the split M = D - N from the
/// subsolution (b/d)^{[1/(m-1)]}, then a positivity-preserving Newton polish.
inline MTensorSystemResult mtensor_system_solve(const DenseTensor& m, std::span<const double> b,
                                                const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t n = m.dim();
    if (m.order() < 2)
        throw DimensionError("mtensor_system_solve: order must be at least 2");
    if (b.size() != n)
        throw DimensionError("mtensor_system_solve: right-hand side dimension mismatch");
    if (!is_z_tensor(m))
        throw PreconditionFailed("mtensor_system_solve: M is not a Z-tensor");
    const Vector d = m.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(d[i] > 0.0))
            throw PreconditionFailed("mtensor_system_solve: nonpositive diagonal entry");
        if (!(b[i] > 0.0))
            throw PreconditionFailed("mtensor_system_solve: right-hand side must be positive");
    }
    const double p = static_cast<double>(m.order() - 1);
    auto root = [p](double v) { return p == 1.0 ? v : p == 2.0 ? std::sqrt(v) : std::pow(v, 1.0 / p); };

    MTensorSystemResult out;
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = root(b[i] / d[i]);
    for (; out.iterations < cfg.max_inner_iters; ++out.iterations) {
        const Vector mx = power_apply(m, x);
        Vector next(n);
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            // (N x^{m-1})_i = d_i x_i^{m-1} - (M x^{m-1})_i
            const double nx = d[i] * std::pow(x[i], p) - mx[i];
            next[i] = root((b[i] + nx) / d[i]);
            delta = std::max(delta, std::abs(next[i] - x[i]));
        }
        if (!std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); })) {
            out.x = std::move(x);
            out.status = SolveStatus::MaxIters;
            return out;
        }
        x = std::move(next);
        if (delta < cfg.tol_residual)
            break;
    }

    auto sys = [&](const Vector& v) { return axpy(-1.0, b, power_apply(m, v)); };
    double r = inf_norm(sys(x));
    for (int it = 0; it < 20 && r > 0.0; ++it) {
        auto step = detail::newton_step(power_jacobian(m, x), scaled(-1.0, sys(x)));
        if (!step)
            break;
        Vector xt = axpy(1.0, *step, x);
        const double rt = inf_norm(sys(xt));
        if (!std::all_of(xt.begin(), xt.end(), [](double v) { return v > 0.0 && std::isfinite(v); }) ||
            !(rt < r))
            break;
        x = std::move(xt);
        r = rt;
    }
    out.x = std::move(x);
    out.residual = r;
    out.status = r <= cfg.tol_residual ? SolveStatus::Converged : SolveStatus::MaxIters;
    return out;
}

/// Positive solution of a VTCP whose tensors are Z-tensors and q1, q2 < 0.
/// Active-set (policy) iteration: from x = 1, freeze the branch attaining the
/// min in each component (ties to branch 1), solve the combined M-tensor
/// system, repeat until the active set is stable and the residual small.
inline SolveReport solve_mtensor(const VtcpInstance& inst, const SolverConfig& cfg,
                                 const SearchConfig& witness_cfg = {}) {
    cfg.validate();
    SolveReport rep;
    rep.method = SolveMethod::MTensor;
    const std::size_t n = inst.dim();
    auto fail = [&](std::string why) {
        rep.status = SolveStatus::PreconditionFailed;
        rep.warnings.push_back(std::move(why));
        rep.x = Vector(n, 0.0);
        rep.residual_inf_norm = inf_norm(residual(inst, rep.x));
        return rep;
    };
    if (!is_z_tensor(inst.a1()) || !is_z_tensor(inst.a2()))
        return fail("both tensors must be Z-tensors");
    for (std::size_t i = 0; i < n; ++i)
        if (!(inst.q1()[i] < 0.0) || !(inst.q2()[i] < 0.0))
            return fail("q1 and q2 must be componentwise negative");
    if (!semi_positive_witness(inst.pair(), witness_cfg).holds())
        rep.warnings.push_back("no semi-positive witness found for the pair");

    Vector x(n, 1.0);
    rep.iterates.push_back(x);
    std::set<std::vector<int>> seen;
    const std::size_t max_sets = n + 5;
    for (;;) {
        const Vector f1 = image1(inst, x);
        const Vector f2 = image2(inst, x);
        std::vector<int> active(n);
        Vector d1(n), d2(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            active[i] = f1[i] <= f2[i] ? 1 : 2;
            d1[i] = active[i] == 1 ? 1.0 : 0.0;
            d2[i] = 1.0 - d1[i];
            b[i] = -(d1[i] * inst.q1()[i] + d2[i] * inst.q2()[i]);
        }
        rep.residual_inf_norm = inf_norm(vmin(f1, f2));
        rep.trace.push_back(rep.residual_inf_norm);
        const bool repeated = !seen.insert(active).second;
        if (repeated) {
            rep.x = x;
            rep.status = rep.residual_inf_norm <= cfg.tol_residual ? SolveStatus::Converged : SolveStatus::MaxIters;
            if (!rep.converged())
                rep.warnings.push_back("active-set cycle detected");
            return rep;
        }
        if (seen.size() > max_sets) {
            rep.x = x;
            rep.status = SolveStatus::MaxIters;
            rep.warnings.push_back("active-set budget exhausted");
            return rep;
        }
        rep.active_sets.push_back(active);
        MTensorSystemResult inner;
        try {
            inner = mtensor_system_solve(diag_combination(d1, d2, inst.pair()), b, cfg);
        } catch (const PreconditionFailed& e) {
            rep.x = x;
            rep.status = SolveStatus::PreconditionFailed;
            rep.warnings.push_back(e.what());
            return rep;
        }
        rep.iterations += 1;
        if (inner.status != SolveStatus::Converged) {
            rep.x = x;
            rep.status = SolveStatus::MaxIters;
            rep.warnings.push_back("inner M-tensor system did not converge");
            return rep;
        }
        x = std::move(inner.x);
        rep.iterates.push_back(x);
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

struct Verification {
    double min_image1 = 0.0;
    double min_image2 = 0.0;
    double inner_product = 0.0;
    double inner_bound = 0.0;
    double residual_inf_norm = 0.0;
    bool feasible1 = false;
    bool feasible2 = false;
    bool complementary = false;
    bool residual_ok = false;

    [[nodiscard]] bool passed() const noexcept { return feasible1 && feasible2 && complementary && residual_ok; }
};

/// Checks the three defining conditions separately plus the min residual:
/// images >= -tol, |<f1, f2>| <= tol (1 + ‖f1‖1 + ‖f2‖1), ‖min(f1,f2)‖∞ <= tol.
inline Verification verify_solution(const VtcpInstance& inst, std::span<const double> x, double tol) {
    if (x.size() != inst.dim())
        throw DimensionError("verify_solution: dimension mismatch");
    const Vector f1 = image1(inst, x);
    const Vector f2 = image2(inst, x);
    Verification v;
    v.min_image1 = *std::min_element(f1.begin(), f1.end());
    v.min_image2 = *std::min_element(f2.begin(), f2.end());
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        v.inner_product += f1[i] * f2[i];
        n1 += std::abs(f1[i]);
        n2 += std::abs(f2[i]);
    }
    v.inner_bound = tol * (1.0 + n1 + n2);
    v.residual_inf_norm = inf_norm(vmin(f1, f2));
    v.feasible1 = v.min_image1 >= -tol;
    v.feasible2 = v.min_image2 >= -tol;
    v.complementary = std::abs(v.inner_product) <= v.inner_bound;
    v.residual_ok = v.residual_inf_norm <= tol;
    return v;
}

// ---------------------------------------------------------------------------
// Grid oracle and boundedness probe
// ---------------------------------------------------------------------------

struct OracleResult {
    std::vector<Vector> solutions; ///< distinct, sorted lexicographically
    bool non_isolated = false;     ///< adjacent grid points both solve exactly
    std::size_t grid_points = 0;
    std::size_t candidates = 0;
};

inline constexpr std::size_t kOracleMaxDim = 3;

/// Exhaustive search of [-R, R]^n (n <= 3) on a uniform grid: face-neighbour
/// local minima of ‖residual‖∞ that are small relative to the local variation
/// are polished by Newton, kept if inside the box, and deduplicated.
inline OracleResult solve_oracle(const VtcpInstance& inst, const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t n = inst.dim();
    if (n > kOracleMaxDim)
        throw DimensionTooLarge("solve_oracle: dimension " + std::to_string(n) + " exceeds the oracle guard of " +
                                std::to_string(kOracleMaxDim));
    const auto pts = static_cast<std::size_t>(cfg.oracle_points);
    const double radius = cfg.oracle_radius;
    auto coord = [&](std::size_t i) {
        return -radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(pts - 1);
    };
    const std::size_t total = detail::checked_pow(pts, n);
    std::vector<double> value(total);
    MultiIndex idx(n, 0);
    Vector x(n);
    std::size_t flat = 0;
    do {
        for (std::size_t k = 0; k < n; ++k)
            x[k] = coord(idx[k]);
        value[flat++] = inf_norm(residual(inst, x));
    } while (detail::next_index(idx, pts));

    OracleResult out;
    out.grid_points = total;
    std::vector<std::pair<double, std::size_t>> candidates;
    std::vector<std::size_t> stride(n);
    for (std::size_t k = 0; k < n; ++k)
        stride[k] = detail::checked_pow(pts, n - 1 - k);
    std::fill(idx.begin(), idx.end(), 0);
    flat = 0;
    do {
        const double v = value[flat];
        bool minimum = true;
        double variation = 0.0;
        for (std::size_t k = 0; k < n && minimum; ++k) {
            for (int s : {-1, 1}) {
                if ((s < 0 && idx[k] == 0) || (s > 0 && idx[k] + 1 == pts))
                    continue;
                const double w = s < 0 ? value[flat - stride[k]] : value[flat + stride[k]];
                if (w < v) {
                    minimum = false;
                    break;
                }
                variation = std::max(variation, w - v);
                if (v <= cfg.tol_residual && w <= cfg.tol_residual)
                    out.non_isolated = true;
            }
        }
        if (minimum && v <= std::max(cfg.tol_residual, variation))
            candidates.emplace_back(v, flat);
        ++flat;
    } while (detail::next_index(idx, pts));

    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    if (candidates.size() > cfg.oracle_max_candidates)
        candidates.resize(cfg.oracle_max_candidates);
    out.candidates = candidates.size();

    const double h = 2.0 * radius / static_cast<double>(pts - 1);
    for (const auto& [v, f] : candidates) {
        (void)v;
        std::size_t rest = f;
        for (std::size_t k = n; k-- > 0;) {
            x[k] = coord(rest % pts);
            rest /= pts;
        }
        SolveReport rep = solve_newton(inst, x, cfg, true);
        if (!rep.converged() || inf_norm(rep.x) > radius + 1e-9 || dist_inf(rep.x, x) > 2.0 * h)
            continue;
        bool duplicate = false;
        for (const auto& s : out.solutions)
            if (dist_inf(s, rep.x) <= cfg.dedup_tol) {
                duplicate = true;
                break;
            }
        if (!duplicate)
            out.solutions.push_back(std::move(rep.x));
    }
    std::sort(out.solutions.begin(), out.solutions.end());
    return out;
}

struct BoundednessReport {
    std::vector<std::size_t> solution_counts; ///< per q sample
    double max_solution_norm = 0.0;
    bool ray_escape = false;    ///< some ray keeps ‖residual‖∞ non-increasing out to 8R
    bool non_isolated = false;
    bool near_box_edge = false; ///< a solution lies within one grid step of the box, so larger ones may exist
    bool bounded = false;
    std::optional<Vector> escape_direction;
};

/// Empirical evidence on whether the solution sets stay bounded: oracle
/// solutions per q sample, plus a ray test along lattice and seeded random
/// unit directions at radii R·{1, 2, 4, 8}.
inline BoundednessReport boundedness_probe(const TensorPair& pair, const std::vector<std::pair<Vector, Vector>>& q_samples,
                                           const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t n = pair.dim();
    if (n > kOracleMaxDim)
        throw DimensionTooLarge("boundedness_probe: dimension exceeds the oracle guard");
    BoundednessReport rep;
    std::vector<Vector> directions;
    for (auto& v : lattice_points(n, detail::kTrits, 729))
        if (normalize(v))
            directions.push_back(std::move(v));
    for (int k = 0; k < cfg.multistart; ++k) {
        auto rng = substream(cfg.seed ^ 0x5241, static_cast<std::uint64_t>(k));
        Vector v = gaussian_vector(rng, n);
        if (normalize(v))
            directions.push_back(std::move(v));
    }
    const double r0 = cfg.oracle_radius;
    for (const auto& [q1, q2] : q_samples) {
        VtcpInstance inst(pair, q1, q2);
        OracleResult o = solve_oracle(inst, cfg);
        rep.solution_counts.push_back(o.solutions.size());
        rep.non_isolated = rep.non_isolated || o.non_isolated;
        for (const auto& s : o.solutions)
            rep.max_solution_norm = std::max(rep.max_solution_norm, inf_norm(s));
        if (rep.ray_escape)
            continue;
        for (const auto& u : directions) {
            double prev = std::numeric_limits<double>::infinity();
            bool monotone = true;
            for (double k : {1.0, 2.0, 4.0, 8.0}) {
                const double r = inf_norm(residual(inst, scaled(k * r0, u)));
                if (r > prev * (1.0 + 1e-12) + 1e-12) {
                    monotone = false;
                    break;
                }
                prev = r;
            }
            if (monotone) {
                rep.ray_escape = true;
                rep.escape_direction = u;
                break;
            }
        }
    }
    const double h = 2.0 * r0 / static_cast<double>(cfg.oracle_points - 1);
    rep.near_box_edge = rep.max_solution_norm >= r0 - h;
    // Solutions near the box edge are reported, not counted as escape: a
    // bounded set may simply extend past R for some q.
    rep.bounded = !rep.ray_escape && !rep.non_isolated;
    return rep;
}

// ---------------------------------------------------------------------------
// Right inverses and the fractional reformulation
// ---------------------------------------------------------------------------

struct RightInverseCheck {
    bool ok = false;
    std::size_t product_order = 0;
    double max_deviation = std::numeric_limits<double>::infinity();
    std::string note;

    explicit operator bool() const noexcept { return ok; }
};

/// True iff A·B equals the unit tensor of order (m-1)(k-1)+1 within 1e-12.
inline RightInverseCheck right_inverse_verify(const DenseTensor& a, const DenseTensor& b) {
    if (a.dim() != b.dim())
        throw DimensionError("right_inverse_verify: dimensions differ");
    RightInverseCheck chk;
    const DenseTensor c = shao_product(a, b);
    chk.product_order = c.order();
    const DenseTensor u = unit_tensor(c.order(), c.dim());
    chk.max_deviation = 0.0;
    for (std::size_t f = 0; f < c.size(); ++f)
        chk.max_deviation = std::max(chk.max_deviation, std::abs(c[f] - u[f]));
    chk.ok = chk.max_deviation <= 1e-12;
    chk.note = "product order " + std::to_string(chk.product_order) +
               (chk.ok ? " equals the unit tensor" : " differs from the unit tensor");
    return chk;
}

namespace detail {

inline std::int64_t reformulation_power(const TensorPair& pair, const DenseTensor& b) {
    if (b.order() < 2)
        throw DimensionError("reformulation: right inverse must have order at least 2");
    return static_cast<std::int64_t>((pair.order() - 1) * (b.order() - 1));
}

} // namespace detail

/// y ∧ (A2·B·(y - t q1)^{[1/p]} + t q2), p = (m-1)(k-1), for a right inverse B of A1.
inline Vector fractional_reformulation_residual(const TensorPair& pair, std::span<const double> q1,
                                                std::span<const double> q2, const DenseTensor& b,
                                                std::span<const double> y, double t) {
    const std::size_t n = pair.dim();
    if (q1.size() != n || q2.size() != n || y.size() != n || b.dim() != n)
        throw DimensionError("fractional_reformulation_residual: dimension mismatch");
    if (!(t >= 0.0 && t <= 1.0))
        throw InvalidArgument("fractional_reformulation_residual: t must lie in [0, 1]");
    const std::int64_t p = detail::reformulation_power(pair, b);
    if (!right_inverse_verify(pair.a1(), b))
        throw PreconditionFailed("fractional_reformulation_residual: B is not a right inverse of A1");
    const Vector w = entrywise_power(axpy(-t, q1, y), Rational(1, p));
    const DenseTensor bw = shao_product(b, DenseTensor::from_vector(w));
    const Vector inner = power_apply(pair.a2(), bw.entries());
    return vmin(y, axpy(t, q2, inner));
}

/// x = B·(y - q1)^{[1/p]}: maps a zero of the reformulation at t = 1 to a VTCP solution.
inline Vector reformulation_solution(const TensorPair& pair, std::span<const double> q1, const DenseTensor& b,
                                     std::span<const double> y) {
    const std::int64_t p = detail::reformulation_power(pair, b);
    const Vector w = entrywise_power(axpy(-1.0, q1, y), Rational(1, p));
    const DenseTensor bw = shao_product(b, DenseTensor::from_vector(w));
    return Vector(bw.entries().begin(), bw.entries().end());
}

} // namespace vtcp
