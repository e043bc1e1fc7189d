#pragma once

// Certificate-based checks for the structured tensor-pair classes.
//
// Universal classes (VR0, VE, VP, VP-I, VP-II, strong VP) are only ever
// refuted: a search either produces a re-verifiable counterexample
// (Outcome::Violated) or reports Outcome::Undetermined with an effort summary.
// Existential properties (semi-positivity) and decidable ones (Z-tensor) can
// return Outcome::HoldsCertified.

#include "vtcp/errors.hpp"
#include "vtcp/products.hpp"
#include "vtcp/search.hpp"
#include "vtcp/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace vtcp {

/// The tensor pair {A1, A2}; both of the same order m >= 2 and dimension n.
class TensorPair {
public:
    TensorPair(DenseTensor a1, DenseTensor a2) : a1_(std::move(a1)), a2_(std::move(a2)) {
        if (!a1_.same_shape(a2_))
            throw DimensionError("tensor pair: A1 and A2 must share order and dimension");
        if (a1_.order() < 2)
            throw DimensionError("tensor pair: order must be at least 2");
    }

    [[nodiscard]] const DenseTensor& a1() const noexcept { return a1_; }
    [[nodiscard]] const DenseTensor& a2() const noexcept { return a2_; }
    [[nodiscard]] std::size_t order() const noexcept { return a1_.order(); }
    [[nodiscard]] std::size_t dim() const noexcept { return a1_.dim(); }

    friend bool operator==(const TensorPair&, const TensorPair&) = default;

private:
    DenseTensor a1_;
    DenseTensor a2_;
};

enum class PairClass { VR0, VE, VP, VP1, VP2, StrongVP };

inline constexpr PairClass kAllPairClasses[] = {PairClass::VR0, PairClass::VE,  PairClass::VP,
                                                PairClass::VP1, PairClass::VP2, PairClass::StrongVP};

inline std::string_view to_string(PairClass c) {
    switch (c) {
    case PairClass::VR0: return "VR0";
    case PairClass::VE: return "VE";
    case PairClass::VP: return "VP";
    case PairClass::VP1: return "VP1";
    case PairClass::VP2: return "VP2";
    case PairClass::StrongVP: return "StrongVP";
    }
    return "?";
}

/// Case-insensitive; accepts "vp-i"/"vp-ii"/"strong-vp" spellings too.
inline PairClass parse_pair_class(std::string_view name) {
    std::string s;
    for (char c : name)
        if (c != '-' && c != '_' && c != ' ')
            s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "vr0") return PairClass::VR0;
    if (s == "ve") return PairClass::VE;
    if (s == "vp") return PairClass::VP;
    if (s == "vp1" || s == "vpi") return PairClass::VP1;
    if (s == "vp2" || s == "vpii") return PairClass::VP2;
    if (s == "strongvp") return PairClass::StrongVP;
    throw InvalidArgument("unknown class name '" + std::string(name) + "'");
}

struct SearchConfig {
    std::uint64_t seed = 0;
    int num_starts = 200;
    double box_radius = 2.0;
    double tol_cert = 1e-9;
    double tol_diag = 1e-6;
    int max_polish_iters = 100;

    void validate() const {
        if (num_starts <= 0 || !(box_radius > 0.0) || !(tol_cert > 0.0) || !(tol_diag > 0.0) ||
            max_polish_iters <= 0)
            throw InvalidArgument("SearchConfig: all parameters must be positive");
    }
};

using VectorPair = std::pair<Vector, Vector>;
using CertificatePoint = std::variant<Vector, VectorPair, SymTensor>;

enum class Outcome { Violated, HoldsCertified, Undetermined };

inline std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Violated: return "violated";
    case Outcome::HoldsCertified: return "holds-certified";
    case Outcome::Undetermined: return "undetermined";
    }
    return "?";
}

/// A point together with everything evaluated at it.
struct Certificate {
    CertificatePoint point;
    Vector image1;     ///< A1 applied to the point (difference map for strong VP)
    Vector image2;
    Vector components; ///< per-component min or product, depending on the class
    double value = 0.0;
    double t = 0.0;        ///< R-tensor certificates only
    bool boundary = false; ///< value within tolerance of 0 rather than clearly negative
};

struct SearchEffort {
    int lattice_points = 0;
    int starts = 0;
    long evaluations = 0;
    double best_value = std::numeric_limits<double>::infinity();
};

struct ClassVerdict {
    std::string class_name;
    Outcome outcome = Outcome::Undetermined;
    std::optional<Certificate> certificate;
    std::string proof_tag; ///< how a conclusive outcome was reached
    std::string note;
    SearchEffort effort;

    [[nodiscard]] bool violated() const noexcept { return outcome == Outcome::Violated; }
    [[nodiscard]] bool holds() const noexcept { return outcome == Outcome::HoldsCertified; }
    [[nodiscard]] bool undetermined() const noexcept { return outcome == Outcome::Undetermined; }
};

// ---------------------------------------------------------------------------
// Simple predicates and constructions
// ---------------------------------------------------------------------------

inline bool is_z_tensor(const DenseTensor& a) {
    for (std::size_t f = 0; f < a.size(); ++f)
        if (!a.is_diagonal_position(f) && a[f] > 0.0)
            return false;
    return true;
}

/// D1·A1 + D2·A2 for diagonal D1 = diag(d1), D2 = diag(d2) with nonnegative entries:
/// entry (i, α) = d1_i a1_{iα} + d2_i a2_{iα}.
inline DenseTensor diag_combination(std::span<const double> d1, std::span<const double> d2,
                                    const TensorPair& pair) {
    const std::size_t n = pair.dim();
    if (d1.size() != n || d2.size() != n)
        throw DimensionError("diag_combination: diagonal length must equal the pair dimension");
    for (std::size_t i = 0; i < n; ++i)
        if (d1[i] < 0.0 || d2[i] < 0.0 || !std::isfinite(d1[i]) || !std::isfinite(d2[i]))
            throw InvalidArgument("diag_combination: diagonal entries must be finite and nonnegative");
    const std::size_t row = pair.a1().size() / n;
    std::vector<double> e(pair.a1().size());
    for (std::size_t f = 0; f < e.size(); ++f) {
        const std::size_t i = f / row;
        e[f] = d1[i] * pair.a1()[f] + d2[i] * pair.a2()[f];
    }
    return DenseTensor(pair.order(), n, std::move(e));
}

// ---------------------------------------------------------------------------
// Violation functionals
// ---------------------------------------------------------------------------

struct ClassEvaluation {
    Vector image1;
    Vector image2;
    Vector components;
    double value = 0.0;
};

namespace detail {

inline const Vector& expect_vector(const CertificatePoint& p, PairClass c) {
    if (auto* v = std::get_if<Vector>(&p))
        return *v;
    throw InvalidArgument("class " + std::string(to_string(c)) + " expects a vector point");
}

inline double max_of(const Vector& v) {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v)
        m = std::max(m, x);
    return m;
}

inline Vector products(const Vector& a, const Vector& b) {
    Vector p(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        p[i] = a[i] * b[i];
    return p;
}

} // namespace detail

/// Evaluate the class functional at a point. Sign convention: a value <= 0 (up
/// to tolerance) at an admissible point witnesses violation; for VR0 the value
/// is ‖min(A1·x, A2·x)‖∞ and witnesses violation when ≈ 0.
inline ClassEvaluation evaluate_class(const TensorPair& pair, PairClass cls, const CertificatePoint& point) {
    ClassEvaluation ev;
    switch (cls) {
    case PairClass::VR0:
    case PairClass::VE: {
        const Vector& x = detail::expect_vector(point, cls);
        ev.image1 = power_apply(pair.a1(), x);
        ev.image2 = power_apply(pair.a2(), x);
        ev.components = vmin(ev.image1, ev.image2);
        ev.value = cls == PairClass::VR0 ? inf_norm(ev.components) : detail::max_of(ev.components);
        break;
    }
    case PairClass::VP:
    case PairClass::VP1: {
        const Vector& x = detail::expect_vector(point, cls);
        ev.image1 = power_apply(pair.a1(), x);
        ev.image2 = power_apply(pair.a2(), x);
        ev.components = detail::products(ev.image1, ev.image2);
        ev.value = detail::max_of(ev.components);
        break;
    }
    case PairClass::VP2: {
        const auto* z = std::get_if<SymTensor>(&point);
        if (!z)
            throw InvalidArgument("class VP2 expects a symmetric tensor point");
        if (z->order() + 1 != pair.order())
            throw DimensionError("VP2: symmetric tensor must have order m-1");
        ev.image1 = sym_apply(pair.a1(), *z);
        ev.image2 = sym_apply(pair.a2(), *z);
        ev.components = detail::products(ev.image1, ev.image2);
        ev.value = detail::max_of(ev.components);
        break;
    }
    case PairClass::StrongVP: {
        const auto* xy = std::get_if<VectorPair>(&point);
        if (!xy)
            throw InvalidArgument("class StrongVP expects a vector pair point");
        ev.image1 = power_apply(pair.a1(), xy->first);
        ev.image2 = power_apply(pair.a2(), xy->first);
        const Vector g = power_apply(pair.a1(), xy->second);
        const Vector f = power_apply(pair.a2(), xy->second);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ev.image1[i] -= g[i];
            ev.image2[i] -= f[i];
        }
        ev.components = detail::products(ev.image1, ev.image2);
        ev.value = detail::max_of(ev.components);
        break;
    }
    }
    return ev;
}

inline double violation_functional(const TensorPair& pair, PairClass cls, const CertificatePoint& point) {
    return evaluate_class(pair, cls, point).value;
}

inline double violation_functional(const TensorPair& pair, std::string_view class_name,
                                   const CertificatePoint& point) {
    return violation_functional(pair, parse_pair_class(class_name), point);
}

/// Rescale a point to the canonical normalization of its class: unit 2-norm
/// vectors, unit 2-norm diagonal for VP2, ‖x − y‖2 = 1 for strong VP. Every
/// class predicate is invariant under positive scaling, so this only fixes
/// the magnitude the tolerance is measured against. Returns nullopt for
/// points that cannot be normalized (zero vector, zero diagonal, x == y).
inline std::optional<CertificatePoint> normalize_point(PairClass cls, const CertificatePoint& point) {
    switch (cls) {
    case PairClass::VR0:
    case PairClass::VE:
    case PairClass::VP:
    case PairClass::VP1: {
        Vector x = detail::expect_vector(point, cls);
        if (!normalize(x))
            return std::nullopt;
        return CertificatePoint{std::move(x)};
    }
    case PairClass::VP2: {
        const auto* z = std::get_if<SymTensor>(&point);
        if (!z)
            return std::nullopt;
        const double s = two_norm(z->diagonal());
        if (!(s > 0.0))
            return std::nullopt;
        Vector vals(z->distinct_entries().begin(), z->distinct_entries().end());
        for (double& v : vals)
            v /= s;
        return CertificatePoint{SymTensor(z->order(), z->dim(), std::move(vals))};
    }
    case PairClass::StrongVP: {
        const auto* xy = std::get_if<VectorPair>(&point);
        if (!xy)
            return std::nullopt;
        const double s = two_norm(axpy(-1.0, xy->second, xy->first));
        if (!(s > 0.0))
            return std::nullopt;
        return CertificatePoint{VectorPair{scaled(1.0 / s, xy->first), scaled(1.0 / s, xy->second)}};
    }
    }
    return std::nullopt;
}

/// Class-specific admissibility of a (normalized) point.
inline bool point_admissible(PairClass cls, const CertificatePoint& point, std::size_t order,
                             const SearchConfig& cfg) {
    switch (cls) {
    case PairClass::VR0:
    case PairClass::VE:
    case PairClass::VP: {
        const auto* x = std::get_if<Vector>(&point);
        return x && inf_norm(*x) > 0.0;
    }
    case PairClass::VP1: {
        const auto* x = std::get_if<Vector>(&point);
        if (!x || !(inf_norm(*x) > 0.0))
            return false;
        const bool nonneg = std::all_of(x->begin(), x->end(), [](double v) { return v >= 0.0; });
        const bool nonpos = std::all_of(x->begin(), x->end(), [](double v) { return v <= 0.0; });
        return nonneg || nonpos;
    }
    case PairClass::VP2: {
        const auto* z = std::get_if<SymTensor>(&point);
        return z && z->order() + 1 == order && inf_norm(z->diagonal()) >= cfg.tol_diag;
    }
    case PairClass::StrongVP: {
        const auto* xy = std::get_if<VectorPair>(&point);
        return xy && xy->first.size() == xy->second.size() && xy->first != xy->second;
    }
    }
    return false;
}

/// Build the certificate record for a point, or nullopt if it does not
/// witness violation at tolerance cfg.tol_cert.
inline std::optional<Certificate> make_certificate(const TensorPair& pair, PairClass cls,
                                                   const CertificatePoint& raw, const SearchConfig& cfg) {
    auto point = normalize_point(cls, raw);
    if (!point || !point_admissible(cls, *point, pair.order(), cfg))
        return std::nullopt;
    ClassEvaluation ev = evaluate_class(pair, cls, *point);
    if (!(ev.value <= cfg.tol_cert))
        return std::nullopt;
    Certificate c;
    c.point = std::move(*point);
    c.image1 = std::move(ev.image1);
    c.image2 = std::move(ev.image2);
    c.components = std::move(ev.components);
    c.value = ev.value;
    c.boundary = std::abs(ev.value) <= cfg.tol_cert;
    return c;
}

/// Re-verify a Violated verdict for a pair class from its stored certificate
/// alone. Non-violated verdicts trivially pass.
inline bool recheck_certificate(const TensorPair& pair, const ClassVerdict& verdict, const SearchConfig& cfg) {
    if (!verdict.violated())
        return true;
    if (!verdict.certificate)
        return false;
    PairClass cls = parse_pair_class(verdict.class_name);
    return make_certificate(pair, cls, verdict.certificate->point, cfg).has_value();
}

// ---------------------------------------------------------------------------
// Pair-class search
// ---------------------------------------------------------------------------

namespace detail {

/// Maps a flat parameter vector onto candidate points of one class.
struct ClassParameterization {
    std::size_t size = 0;
    std::function<bool(Vector&)> project;
    std::function<CertificatePoint(const Vector&)> to_point;
    std::function<Vector(std::mt19937_64&)> random_start;
    std::vector<Vector> lattice;
};

inline constexpr double kTrits[] = {-1.0, 0.0, 1.0};
inline constexpr double kBits[] = {0.0, 1.0};
inline constexpr std::size_t kLatticeCap = 6561;

inline ClassParameterization vector_parameterization(std::size_t n, double orthant_sign) {
    ClassParameterization p;
    p.size = n;
    const bool constrained = orthant_sign != 0.0;
    p.project = [constrained, orthant_sign](Vector& x) {
        if (constrained)
            for (double& v : x)
                v = orthant_sign * std::max(orthant_sign * v, 0.0);
        return normalize(x);
    };
    p.to_point = [](const Vector& x) { return CertificatePoint{x}; };
    p.random_start = [n, constrained, orthant_sign](std::mt19937_64& rng) {
        Vector x = gaussian_vector(rng, n);
        if (constrained)
            for (double& v : x)
                v = orthant_sign * std::abs(v);
        normalize(x);
        return x;
    };
    auto pts = constrained ? lattice_points(n, kBits, kLatticeCap) : lattice_points(n, kTrits, kLatticeCap);
    for (auto& v : pts) {
        if (constrained)
            for (double& c : v)
                c *= orthant_sign;
        if (normalize(v))
            p.lattice.push_back(std::move(v));
    }
    return p;
}

inline ClassParameterization sym_parameterization(std::size_t p_order, std::size_t n, double radius) {
    const auto indices = SymTensor::sorted_indices(p_order, n);
    std::vector<std::size_t> diag_pos, off_pos;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const auto& idx = indices[k];
        if (std::all_of(idx.begin(), idx.end(), [&](std::size_t v) { return v == idx.front(); }))
            diag_pos.push_back(k);
        else
            off_pos.push_back(k);
    }
    ClassParameterization p;
    p.size = indices.size();
    // Parameters: diagonal entries first, then off-diagonal distinct entries.
    p.project = [n, radius](Vector& v) {
        Vector d(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
        if (!normalize(d))
            return false;
        std::copy(d.begin(), d.end(), v.begin());
        for (std::size_t k = n; k < v.size(); ++k)
            v[k] = std::clamp(v[k], -radius, radius);
        return true;
    };
    p.to_point = [p_order, n, diag_pos, off_pos](const Vector& v) {
        Vector vals(diag_pos.size() + off_pos.size());
        for (std::size_t i = 0; i < diag_pos.size(); ++i)
            vals[diag_pos[i]] = v[i];
        for (std::size_t k = 0; k < off_pos.size(); ++k)
            vals[off_pos[k]] = v[n + k];
        return CertificatePoint{SymTensor(p_order, n, std::move(vals))};
    };
    const std::size_t n_off = off_pos.size();
    p.random_start = [n, n_off, radius](std::mt19937_64& rng) {
        Vector d = gaussian_vector(rng, n);
        normalize(d);
        Vector o = uniform_vector(rng, n_off, -radius, radius);
        d.insert(d.end(), o.begin(), o.end());
        return d;
    };
    for (auto& v : lattice_points(p.size, kTrits, kLatticeCap)) {
        Vector d(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
        if (!normalize(d))
            continue;
        std::copy(d.begin(), d.end(), v.begin());
        p.lattice.push_back(std::move(v));
    }
    return p;
}

inline ClassParameterization pair_parameterization(std::size_t n, double radius) {
    ClassParameterization p;
    p.size = 2 * n;
    // Parameters (c, d): x = c + d/2, y = c - d/2 with ‖d‖2 = 1, c in the box.
    p.project = [n, radius](Vector& v) {
        Vector d(v.begin() + static_cast<std::ptrdiff_t>(n), v.end());
        if (!normalize(d))
            return false;
        std::copy(d.begin(), d.end(), v.begin() + static_cast<std::ptrdiff_t>(n));
        for (std::size_t k = 0; k < n; ++k)
            v[k] = std::clamp(v[k], -radius, radius);
        return true;
    };
    p.to_point = [n](const Vector& v) {
        Vector x(n), y(n);
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = v[k] + 0.5 * v[n + k];
            y[k] = v[k] - 0.5 * v[n + k];
        }
        return CertificatePoint{VectorPair{std::move(x), std::move(y)}};
    };
    p.random_start = [n, radius](std::mt19937_64& rng) {
        Vector c = uniform_vector(rng, n, -radius, radius);
        Vector d = gaussian_vector(rng, n);
        normalize(d);
        c.insert(c.end(), d.begin(), d.end());
        return c;
    };
    auto pts = lattice_points(n, kTrits, kLatticeCap);
    if (pts.size() * pts.size() <= kLatticeCap) {
        for (const auto& x : pts)
            for (const auto& y : pts) {
                if (x == y)
                    continue;
                Vector d = axpy(-1.0, y, x);
                const double s = two_norm(d);
                Vector v(2 * n);
                for (std::size_t k = 0; k < n; ++k) {
                    v[k] = std::clamp(0.5 * (x[k] + y[k]) / s, -radius, radius);
                    v[n + k] = d[k] / s;
                }
                p.lattice.push_back(std::move(v));
            }
    }
    return p;
}

inline std::uint64_t class_salt(PairClass cls) { return 0x1000 + static_cast<std::uint64_t>(cls); }

} // namespace detail

/// Search for a counterexample to membership of `pair` in `cls`.
///
/// Deterministic lattice candidates (entries in {-1,0,1}) are tried first,
/// then cfg.num_starts seeded random starts, each polished by compass search
/// for at most cfg.max_polish_iters polls. The first certificate in that
/// order is returned; starts draw from per-start substreams of cfg.seed.
inline ClassVerdict check_pair_class(const TensorPair& pair, PairClass cls, const SearchConfig& cfg) {
    cfg.validate();
    ClassVerdict verdict;
    verdict.class_name = std::string(to_string(cls));
    const std::size_t n = pair.dim();
    const std::size_t m = pair.order();

    if (cls == PairClass::StrongVP && m % 2 == 1) {
        // Odd order: x^{m-1} = (-x)^{m-1}, so both difference maps vanish at (x, -x).
        Vector x(n, 0.0), y(n, 0.0);
        x[0] = 0.5;
        y[0] = -0.5;
        verdict.certificate = make_certificate(pair, cls, VectorPair{x, y}, cfg);
        verdict.outcome = Outcome::Violated;
        verdict.proof_tag = "odd-order";
        verdict.effort.best_value = verdict.certificate ? verdict.certificate->value : 0.0;
        return verdict;
    }

    std::vector<detail::ClassParameterization> params;
    switch (cls) {
    case PairClass::VR0:
    case PairClass::VE:
    case PairClass::VP:
        params.push_back(detail::vector_parameterization(n, 0.0));
        break;
    case PairClass::VP1:
        params.push_back(detail::vector_parameterization(n, 1.0));
        if (m % 2 == 1)
            params.push_back(detail::vector_parameterization(n, -1.0));
        break;
    case PairClass::VP2:
        params.push_back(detail::sym_parameterization(m - 1, n, cfg.box_radius));
        break;
    case PairClass::StrongVP:
        params.push_back(detail::pair_parameterization(n, cfg.box_radius));
        break;
    }

    auto objective_for = [&](const detail::ClassParameterization& p) {
        return [&pair, &p, cls, &verdict](const Vector& v) {
            ++verdict.effort.evaluations;
            return violation_functional(pair, cls, p.to_point(v));
        };
    };

    auto accept = [&](const CertificatePoint& point, const char* tag) {
        if (auto cert = make_certificate(pair, cls, point, cfg)) {
            verdict.outcome = Outcome::Violated;
            verdict.certificate = std::move(cert);
            verdict.proof_tag = tag;
            verdict.effort.best_value = std::min(verdict.effort.best_value, verdict.certificate->value);
            return true;
        }
        return false;
    };

    for (const auto& p : params) {
        auto objective = objective_for(p);
        for (const auto& v : p.lattice) {
            ++verdict.effort.lattice_points;
            const double val = objective(v);
            verdict.effort.best_value = std::min(verdict.effort.best_value, val);
            if (val <= cfg.tol_cert && accept(p.to_point(v), "lattice-point"))
                return verdict;
        }
    }

    for (int s = 0; s < cfg.num_starts; ++s) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            const auto& p = params[k];
            auto rng = substream(cfg.seed ^ detail::class_salt(cls), static_cast<std::uint64_t>(s) * 4 + k);
            Vector start = p.random_start(rng);
            auto objective = objective_for(p);
            auto result = pattern_search(objective, p.project, start, 0.25, cfg.max_polish_iters,
                                         -cfg.tol_cert);
            if (k == 0)
                ++verdict.effort.starts;
            verdict.effort.best_value = std::min(verdict.effort.best_value, result.value);
            if (result.value <= cfg.tol_cert && accept(p.to_point(result.x), "search"))
                return verdict;
        }
    }
    verdict.outcome = Outcome::Undetermined;
    verdict.note = "no counterexample found";
    return verdict;
}

// ---------------------------------------------------------------------------
// R-tensor
// ---------------------------------------------------------------------------

/// Residual of the R-tensor inconsistency system at a simplex point x with
/// shift t: max of |(Ax)_i + t| on supp(x), the shortfall of (Ax)_j + t >= 0
/// off the support, the shortfall of t >= 0, and of x >= 0 / Σx = 1.
inline double r_system_residual(const DenseTensor& a, std::span<const double> x, double t) {
    const Vector ax = power_apply(a, x);
    double r = std::max(0.0, -t);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        r = std::max(r, std::max(0.0, -x[i]));
        sum += x[i];
        if (x[i] > 0.0)
            r = std::max(r, std::abs(ax[i] + t));
        else
            r = std::max(r, std::max(0.0, -(ax[i] + t)));
    }
    return std::max(r, std::abs(sum - 1.0));
}

namespace detail {

/// Damped least-squares Newton on the face system
///   (A x)_i + t = 0 for i in S,  Σ_{i in S} x_i = 1,  x_j = 0 off S.
inline std::pair<Vector, double> solve_face(const DenseTensor& a, const std::vector<std::size_t>& support,
                                            Vector x, double t) {
    const auto s = static_cast<Eigen::Index>(support.size());
    auto eval = [&](const Vector& xv, double tv) {
        Eigen::VectorXd f(s + 1);
        const Vector ax = power_apply(a, xv);
        double sum = 0.0;
        for (Eigen::Index k = 0; k < s; ++k) {
            f(k) = ax[support[static_cast<std::size_t>(k)]] + tv;
            sum += xv[support[static_cast<std::size_t>(k)]];
        }
        f(s) = sum - 1.0;
        return f;
    };
    Eigen::VectorXd f = eval(x, t);
    for (int it = 0; it < 60 && f.lpNorm<Eigen::Infinity>() > 1e-14; ++it) {
        const Matrix jac = power_jacobian(a, x);
        Eigen::MatrixXd j(s + 1, s + 1);
        for (Eigen::Index r = 0; r < s; ++r) {
            for (Eigen::Index c = 0; c < s; ++c)
                j(r, c) = jac(static_cast<Eigen::Index>(support[static_cast<std::size_t>(r)]),
                              static_cast<Eigen::Index>(support[static_cast<std::size_t>(c)]));
            j(r, s) = 1.0;
        }
        for (Eigen::Index c = 0; c < s; ++c)
            j(s, c) = 1.0;
        j(s, s) = 0.0;
        Eigen::VectorXd step = j.completeOrthogonalDecomposition().solve(-f);
        double alpha = 1.0;
        bool moved = false;
        for (int b = 0; b < 30; ++b, alpha *= 0.5) {
            Vector xt = x;
            for (Eigen::Index k = 0; k < s; ++k)
                xt[support[static_cast<std::size_t>(k)]] += alpha * step(k);
            const double tt = t + alpha * step(s);
            Eigen::VectorXd ft = eval(xt, tt);
            if (ft.allFinite() && ft.lpNorm<Eigen::Infinity>() < f.lpNorm<Eigen::Infinity>()) {
                x = std::move(xt);
                t = tt;
                f = std::move(ft);
                moved = true;
                break;
            }
        }
        if (!moved)
            break;
    }
    return {std::move(x), t};
}

} // namespace detail

/// Search for a solution of the R-tensor inconsistency system
///   θ ≠ x ≥ θ, t ≥ 0, (Ax)_i + t = 0 where x_i > 0, (Ax)_j + t ≥ 0 where x_j = 0,
/// normalized to Σx = 1. Violated (certificate (x, t)) means A is NOT an
/// R-tensor; Undetermined means no solution was found. Every support is
/// enumerated when n <= 3; otherwise singletons, pairs and seeded random
/// supports are tried.
inline ClassVerdict is_r_tensor(const DenseTensor& a, const SearchConfig& cfg) {
    cfg.validate();
    if (a.order() < 2)
        throw DimensionError("is_r_tensor: order must be at least 2");
    const std::size_t n = a.dim();
    ClassVerdict verdict;
    verdict.class_name = "R-tensor";

    auto try_point = [&](const Vector& x, double t, const char* tag) {
        for (double v : x)
            if (v < 0.0)
                return false;
        const double res = r_system_residual(a, x, t);
        ++verdict.effort.evaluations;
        verdict.effort.best_value = std::min(verdict.effort.best_value, res);
        if (!(res <= cfg.tol_cert) || t < 0.0)
            return false;
        Certificate c;
        c.point = x;
        c.t = t;
        c.image1 = power_apply(a, x);
        c.components = c.image1;
        for (double& v : c.components)
            v += t;
        c.value = res;
        c.boundary = true;
        verdict.outcome = Outcome::Violated;
        verdict.certificate = std::move(c);
        verdict.proof_tag = tag;
        return true;
    };

    std::vector<std::vector<std::size_t>> supports;
    if (n <= 3) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t{1} << i))
                    s.push_back(i);
            supports.push_back(std::move(s));
        }
        std::stable_sort(supports.begin(), supports.end(),
                         [](const auto& l, const auto& r) { return l.size() < r.size(); });
    } else {
        for (std::size_t i = 0; i < n; ++i)
            supports.push_back({i});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                supports.push_back({i, j});
        auto rng = substream(cfg.seed ^ 0x5254, 0);
        std::bernoulli_distribution coin(0.5);
        for (int k = 0; k < cfg.num_starts; ++k) {
            std::vector<std::size_t> s;
            for (std::size_t i = 0; i < n; ++i)
                if (coin(rng))
                    s.push_back(i);
            if (s.size() >= 3)
                supports.push_back(std::move(s));
        }
    }

    const int per_support =
        std::max(8, cfg.num_starts / static_cast<int>(std::max<std::size_t>(1, supports.size())));
    for (std::size_t si = 0; si < supports.size(); ++si) {
        const auto& s = supports[si];
        if (s.size() == 1) {
            // x = e_i: exact check of a_{i..i} <= 0 and (A e_i)_j >= a_{i..i}.
            Vector x(n, 0.0);
            x[s[0]] = 1.0;
            const double t = -a[a.diagonal_position(s[0])];
            ++verdict.effort.starts;
            if (try_point(x, t, "support-enumeration"))
                return verdict;
            continue;
        }
        auto rng = substream(cfg.seed ^ 0x5254, 1 + si);
        std::gamma_distribution<double> gamma(1.0, 1.0);
        for (int k = 0; k < per_support; ++k) {
            ++verdict.effort.starts;
            Vector x(n, 0.0);
            double total = 0.0;
            for (std::size_t i : s) {
                x[i] = k == 0 ? 1.0 : gamma(rng) + 1e-3;
                total += x[i];
            }
            for (std::size_t i : s)
                x[i] /= total;
            const Vector ax = power_apply(a, x);
            double t0 = 0.0;
            for (std::size_t i : s)
                t0 -= ax[i] / static_cast<double>(s.size());
            auto [xs, ts] = detail::solve_face(a, s, x, t0);
            bool interior = true;
            for (std::size_t i : s)
                interior = interior && xs[i] > 0.0;
            if (!interior)
                continue;
            if (ts < 0.0 && ts > -cfg.tol_cert)
                ts = 0.0;
            if (try_point(xs, ts, "support-enumeration"))
                return verdict;
        }
    }
    verdict.outcome = Outcome::Undetermined;
    verdict.note = "no solution of the inconsistency system found (empirically an R-tensor)";
    return verdict;
}

/// Re-verify an R-tensor Violated verdict from its certificate.
inline bool recheck_r_certificate(const DenseTensor& a, const ClassVerdict& verdict, const SearchConfig& cfg) {
    if (!verdict.violated())
        return true;
    if (!verdict.certificate)
        return false;
    const auto* x = std::get_if<Vector>(&verdict.certificate->point);
    if (!x || verdict.certificate->t < 0.0 || inf_norm(*x) == 0.0)
        return false;
    return r_system_residual(a, *x, verdict.certificate->t) <= cfg.tol_cert;
}

// ---------------------------------------------------------------------------
// Semi-positivity and strong M-tensors
// ---------------------------------------------------------------------------

/// Smallest component over both images at x; -inf unless x > 0.
inline double semi_positive_margin(const TensorPair& pair, std::span<const double> x) {
    for (double v : x)
        if (!(v > 0.0))
            return -std::numeric_limits<double>::infinity();
    const Vector g = power_apply(pair.a1(), x);
    const Vector f = power_apply(pair.a2(), x);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i)
        m = std::min({m, g[i], f[i]});
    return m;
}

/// Look for x > θ with A1·x > θ and A2·x > θ: the ones vector, then small
/// integer points ({1,2}^n, {1,2,3}^n), then seeded positive samples, then
/// compass-search maximization of the smallest image component.
inline ClassVerdict semi_positive_witness(const TensorPair& pair, const SearchConfig& cfg) {
    cfg.validate();
    const std::size_t n = pair.dim();
    ClassVerdict verdict;
    verdict.class_name = "semipositive";

    auto accept = [&](const Vector& x, const char* tag) {
        const double margin = semi_positive_margin(pair, x);
        ++verdict.effort.evaluations;
        verdict.effort.best_value = std::min(verdict.effort.best_value, -margin);
        if (!(margin > 0.0))
            return false;
        Certificate c;
        c.point = x;
        c.image1 = power_apply(pair.a1(), x);
        c.image2 = power_apply(pair.a2(), x);
        c.components = vmin(c.image1, c.image2);
        c.value = margin;
        verdict.certificate = std::move(c);
        verdict.outcome = Outcome::HoldsCertified;
        verdict.proof_tag = tag;
        return true;
    };

    if (accept(Vector(n, 1.0), "ones"))
        return verdict;
    static constexpr double kSmall[] = {1.0, 2.0};
    static constexpr double kSmall3[] = {1.0, 2.0, 3.0};
    for (const auto& x : lattice_points(n, kSmall, 4096)) {
        ++verdict.effort.lattice_points;
        if (accept(x, "integer-point"))
            return verdict;
    }
    for (const auto& x : lattice_points(n, kSmall3, 729)) {
        ++verdict.effort.lattice_points;
        if (accept(x, "integer-point"))
            return verdict;
    }

    std::vector<std::pair<double, Vector>> samples;
    for (int s = 0; s < cfg.num_starts; ++s) {
        auto rng = substream(cfg.seed ^ 0x5350, static_cast<std::uint64_t>(s));
        Vector x = uniform_vector(rng, n, 1e-3, cfg.box_radius);
        ++verdict.effort.starts;
        if (accept(x, "random-sample"))
            return verdict;
        samples.emplace_back(semi_positive_margin(pair, x), std::move(x));
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const auto& l, const auto& r) { return l.first > r.first; });
    const std::size_t polish = std::min<std::size_t>(samples.size(), 20);
    auto neg_margin = [&](const Vector& x) {
        ++verdict.effort.evaluations;
        return -semi_positive_margin(pair, x);
    };
    auto project = [](Vector& x) {
        for (double& v : x)
            v = std::max(v, 1e-6);
        return normalize(x);
    };
    for (std::size_t k = 0; k < polish; ++k) {
        Vector x0 = samples[k].second;
        normalize(x0);
        auto r = pattern_search(neg_margin, project, x0, 0.1, cfg.max_polish_iters,
                                -std::numeric_limits<double>::infinity());
        if (r.value < 0.0 && accept(r.x, "maximization"))
            return verdict;
    }
    verdict.outcome = Outcome::Undetermined;
    verdict.note = "no positive witness found";
    return verdict;
}

/// A Z-tensor is a strong M-tensor iff it is semi-positive.
inline ClassVerdict is_strong_m_tensor(const DenseTensor& a, const SearchConfig& cfg) {
    ClassVerdict verdict;
    verdict.class_name = "strong-M";
    if (a.order() < 2)
        throw DimensionError("is_strong_m_tensor: order must be at least 2");
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (!a.is_diagonal_position(f) && a[f] > 0.0) {
            verdict.outcome = Outcome::Violated;
            verdict.proof_tag = "not-z-tensor";
            MultiIndex idx = a.multi_index(f);
            std::string s;
            for (std::size_t v : idx)
                s += std::to_string(v + 1);
            verdict.note = "positive off-diagonal entry a_" + s + " = " + std::to_string(a[f]);
            return verdict;
        }
    }
    ClassVerdict w = semi_positive_witness(TensorPair(a, a), cfg);
    verdict.effort = w.effort;
    if (w.holds()) {
        verdict.outcome = Outcome::HoldsCertified;
        verdict.certificate = std::move(w.certificate);
        verdict.proof_tag = "z-tensor+positive-witness";
    } else {
        verdict.outcome = Outcome::Undetermined;
        verdict.note = "Z-tensor but no positive witness found";
    }
    return verdict;
}

} // namespace vtcp
