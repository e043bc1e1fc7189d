#pragma once

// The worked examples as data: tensor pairs, the facts stated about them, and
// a runner that re-derives every fact with the library.

#include "vtcp/classes.hpp"
#include "vtcp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace vtcp {

/// (A_k x^{m-1}) equals `expected` exactly (up to rounding).
struct PowerValueFact {
    int tensor = 1;
    Vector x;
    Vector expected;
};

/// Class functional components (and optionally images) at a given point.
struct ComponentValueFact {
    PairClass cls;
    CertificatePoint point;
    Vector expected_components;
    std::optional<Vector> expected_image1;
    std::optional<Vector> expected_image2;
};

/// Membership (violated == false: search must find no counterexample) or
/// non-membership (violated == true: search must return a re-verifiable
/// certificate; a stated point is checked as well).
struct ClassFact {
    PairClass cls;
    bool violated = false;
    std::optional<CertificatePoint> stated_point;
};

struct RTensorFact {
    int tensor = 2;
};

struct ZTensorFact {
    int tensor = 1;
    bool expected = true;
};

struct SemiPositiveFact {
    Vector witness;
};

/// Every listed method returns `expected` (within 1e-8) for (q1, q2). For
/// the oracle, the solution list must be exactly {expected}, or with
/// `positive_only` its strictly positive members must be.
struct SolutionFact {
    Vector q1;
    Vector q2;
    Vector expected;
    std::vector<SolveMethod> methods;
    Vector x0;
    bool positive_only = false;
};

using FactBody = std::variant<PowerValueFact, ComponentValueFact, ClassFact, RTensorFact, ZTensorFact,
                              SemiPositiveFact, SolutionFact>;

struct Fact {
    std::string claim;
    std::string citation;
    bool positive = true; ///< membership/existence (true) or violation (false)
    FactBody body;
};

struct PaperExample {
    std::string id;
    TensorPair pair;
    Vector q1; ///< registered right-hand sides (zero where the example has none)
    Vector q2;
    std::vector<Fact> facts;

    [[nodiscard]] VtcpInstance instance() const { return VtcpInstance(pair, q1, q2); }
};

namespace detail {

inline TensorPair pair_of(std::size_t order, Vector a1, Vector a2) {
    return TensorPair(DenseTensor(order, 2, std::move(a1)), DenseTensor(order, 2, std::move(a2)));
}

/// Symmetric order-3, dim-2 tensor with slices Z(1,:,:) = [[0,-1],[-1,0]],
/// Z(2,:,:) = [[-1,0],[0,1]]; distinct entries (z111, z112, z122, z222).
inline SymTensor stated_z() { return SymTensor(3, 2, {0.0, -1.0, 0.0, 1.0}); }

inline std::vector<PaperExample> build_registry() {
    std::vector<PaperExample> reg;
    const Vector zero2{0.0, 0.0};

    // Flat entries list the slices A(i,:,:) (order 3) or A(i,j,:,:) (order 4)
    // in row-major order.
    const TensorPair p31 = pair_of(3, {-1, 3, 0, 0, 1, 0, -3, 1}, {0, 2, 1, 0, 2, -1, -2, 1});
    const TensorPair p32 = pair_of(4, {1, 2, -2, 0, 0, 0, 0, 0, 0, -2, 1, 0, 2, 0, 0, 1},
                                   {1, 0, 0, 1, 0, 1, 2, 0, 0, 1, 1, 0, 0, 0, 0, 1});
    const TensorPair p33 = pair_of(3, {0, 1, -1, 1, 1, 0, 0, 1}, {0, -2, 1, 1, -1, 0, -2, -1});
    const TensorPair p34 = pair_of(3, {1, 0, 0, 1, 1, 1, -1, 0}, {1, 1, -1, 1, 0, 0, 0, -1});
    const TensorPair p35 = pair_of(3, {1, 0, 0, 0, 1, 0, 0, 1}, {0, 2, -1, 0, 1, 3, 0, 1});
    const TensorPair p36 = pair_of(4, {1, 1, -2, 1, 1, -1, 0, 0, 0, 0, 1, 0, 0, -1, 1, 1},
                                   {1, 0, 0, 0, 0, 0, 0, 0, 0, -1, 1, 0, 0, 0, 0, 1});
    const TensorPair p37 = pair_of(4, {0, -1, 2, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1},
                                   {0, 1, 1, 0, -1, 0, 0, 0, 1, -1, 1, 0, 0, 0, 0, 1});
    const TensorPair p42 = pair_of(3, {1, 0, 0, 0, -1, 0, 0, 1}, {1, 0, 0, 0, -1, -1, 0, 1});

    reg.push_back({"3.1", p31, zero2, zero2,
                   {
                       {"VE: no counterexample", "example 3.1: VE membership", true,
                        ClassFact{PairClass::VE, false, std::nullopt}},
                       {"VP: no counterexample", "example 3.1 with the VE-in-VP inclusion", true,
                        ClassFact{PairClass::VP, false, std::nullopt}},
                       {"strong VP violated (odd order)", "odd-order result, applied to example 3.1", false,
                        ClassFact{PairClass::StrongVP, true, std::nullopt}},
                   }});

    reg.push_back({"3.2", p32, zero2, zero2,
                   {
                       {"A1 x^3 at (-1,-1) = (-1,-2)", "example 3.2: printed image values", true,
                        PowerValueFact{1, {-1, -1}, {-1, -2}}},
                       {"A2 x^3 at (-1,-1) = (-5,-3)", "example 3.2: printed image values", true,
                        PowerValueFact{2, {-1, -1}, {-5, -3}}},
                       {"VP: no counterexample", "example 3.2: VP membership", true,
                        ClassFact{PairClass::VP, false, std::nullopt}},
                       {"VE violated, e.g. at x = (-1,-1)", "example 3.2: VE non-membership", false,
                        ClassFact{PairClass::VE, true, CertificatePoint{Vector{-1, -1}}}},
                       {"stated Z gives products (0,0)", "symmetric tensor stated after example 3.4, for example 3.2",
                        false, ComponentValueFact{PairClass::VP2, stated_z(), {0, 0}, std::nullopt, std::nullopt}},
                       {"VP-II violated", "symmetric tensor stated after example 3.4, for example 3.2", false,
                        ClassFact{PairClass::VP2, true, CertificatePoint{stated_z()}}},
                   }});

    reg.push_back({"3.3", p33, zero2, zero2,
                   {
                       {"VR0: no counterexample", "example 3.3: VR0 membership", true,
                        ClassFact{PairClass::VR0, false, std::nullopt}},
                       {"products at (1,1) = (0,-8)", "example 3.3: printed products", false,
                        ComponentValueFact{PairClass::VP, Vector{1, 1}, {0, -8}, std::nullopt, std::nullopt}},
                       {"VP violated, e.g. at x = (1,1)", "example 3.3: VP non-membership", false,
                        ClassFact{PairClass::VP, true, CertificatePoint{Vector{1, 1}}}},
                   }});

    reg.push_back({"3.4", p34, zero2, zero2,
                   {
                       {"VP-II: no counterexample", "example 3.4: VP-II membership", true,
                        ClassFact{PairClass::VP2, false, std::nullopt}},
                       {"A1Z = (2,1), A2Z = (2,-1) at z11 = z22 = 1, z12 = 0",
                        "example 3.4: closed forms of A1Z and A2Z", true,
                        ComponentValueFact{PairClass::VP2, SymTensor(2, 2, {1, 0, 1}), {4, -1}, Vector{2, 1},
                                           Vector{2, -1}}},
                   }});

    reg.push_back({"3.5", p35, zero2, zero2,
                   {
                       {"VP-I: no counterexample", "example 3.5: VP-I membership", true,
                        ClassFact{PairClass::VP1, false, std::nullopt}},
                       {"products at (1,-1) = (-1,-2)", "example 3.5: printed products", false,
                        ComponentValueFact{PairClass::VP, Vector{1, -1}, {-1, -2}, std::nullopt, std::nullopt}},
                       {"VP violated, e.g. at x = (1,-1)", "example 3.5: VP non-membership", false,
                        ClassFact{PairClass::VP, true, CertificatePoint{Vector{1, -1}}}},
                   }});

    reg.push_back({"3.6", p36, zero2, zero2,
                   {
                       {"strong VP: no counterexample", "example 3.6: strong VP membership", true,
                        ClassFact{PairClass::StrongVP, false, std::nullopt}},
                       {"stated Z gives products (0,0)", "example 3.6: stated symmetric tensor", false,
                        ComponentValueFact{PairClass::VP2, stated_z(), {0, 0}, std::nullopt, std::nullopt}},
                       {"VP-II violated", "example 3.6: VP-II non-membership", false,
                        ClassFact{PairClass::VP2, true, CertificatePoint{stated_z()}}},
                   }});

    reg.push_back({"3.7", p37, zero2, zero2,
                   {
                       {"VP: no counterexample", "example 3.7: VP membership", true,
                        ClassFact{PairClass::VP, false, std::nullopt}},
                       {"difference products at ((0,1),(1,0)) = (0,0)", "example 3.7: printed products", false,
                        ComponentValueFact{PairClass::StrongVP, VectorPair{{0, 1}, {1, 0}}, {0, 0}, std::nullopt,
                                           std::nullopt}},
                       {"strong VP violated, e.g. at ((0,1),(1,0))", "example 3.7: strong VP non-membership", false,
                        ClassFact{PairClass::StrongVP, true, CertificatePoint{VectorPair{{0, 1}, {1, 0}}}}},
                   }});

    reg.push_back({"4.1", p36, {-8, -1}, {-1, -1},
                   {
                       {"A2 is an R-tensor (no inconsistency witness)", "example 4.1: R-tensor property of A2", true,
                        RTensorFact{2}},
                       {"strong VP: no counterexample", "example 4.1, pair of example 3.6", true,
                        ClassFact{PairClass::StrongVP, false, std::nullopt}},
                       {"unique solution (2,1) for q1 = (-8,-1), q2 = (-1,-1)",
                        "example 4.1: unique solvability, solved by its case analysis", true,
                        SolutionFact{{-8, -1},
                                     {-1, -1},
                                     {2, 1},
                                     {SolveMethod::Newton, SolveMethod::Homotopy, SolveMethod::Oracle},
                                     {1, 1},
                                     false}},
                   }});

    reg.push_back({"4.2", p42, {-1, -1}, {-4, -2},
                   {
                       {"A1 is a Z-tensor", "example 4.2: Z-tensor property", true, ZTensorFact{1, true}},
                       {"A2 is a Z-tensor", "example 4.2: Z-tensor property", true, ZTensorFact{2, true}},
                       {"A1 x^2 at (1,2) = (1,3)", "example 4.2: printed image values", true,
                        PowerValueFact{1, {1, 2}, {1, 3}}},
                       {"A2 x^2 at (1,2) = (1,1)", "example 4.2: printed image values", true,
                        PowerValueFact{2, {1, 2}, {1, 1}}},
                       {"semi-positive, witness (1,2)", "example 4.2: semi-positivity witness", true,
                        SemiPositiveFact{{1, 2}}},
                       {"unique positive solution (2, 1+sqrt 7) for q1 = (-1,-1), q2 = (-4,-2)",
                        "example 4.2: unique positive solution, solved by its case analysis", true,
                        SolutionFact{{-1, -1},
                                     {-4, -2},
                                     {2, 1 + std::sqrt(7.0)},
                                     {SolveMethod::Newton, SolveMethod::Homotopy, SolveMethod::MTensor,
                                      SolveMethod::Oracle},
                                     {1, 1},
                                     true}},
                   }});
    return reg;
}

} // namespace detail

inline const std::vector<PaperExample>& example_registry() {
    static const std::vector<PaperExample> reg = detail::build_registry();
    return reg;
}

inline const PaperExample& find_example(std::string_view id) {
    for (const auto& e : example_registry())
        if (e.id == id)
            return e;
    throw InvalidArgument("unknown example id '" + std::string(id) + "'");
}

// ---------------------------------------------------------------------------
// Reproduction
// ---------------------------------------------------------------------------

struct FactResult {
    std::string claim;
    std::string citation;
    bool passed = false;
    std::string observed;
    std::optional<ClassVerdict> verdict;
};

struct ReproductionReport {
    std::string id;
    std::vector<FactResult> facts;

    [[nodiscard]] std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(facts.begin(), facts.end(), [](const auto& f) { return !f.passed; }));
    }
    [[nodiscard]] bool passed() const { return failures() == 0; }
};

namespace detail {

inline std::string fmt(std::span<const double> v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << '(';
    for (std::size_t i = 0; i < v.size(); ++i)
        ss << (i ? ", " : "") << v[i];
    ss << ')';
    return ss.str();
}

inline std::string fmt_point(const CertificatePoint& p) {
    if (const auto* x = std::get_if<Vector>(&p))
        return "x = " + fmt(*x);
    if (const auto* xy = std::get_if<VectorPair>(&p))
        return "x = " + fmt(xy->first) + ", y = " + fmt(xy->second);
    return "Z distinct entries = " + fmt(std::get<SymTensor>(p).distinct_entries());
}

inline bool close(std::span<const double> a, std::span<const double> b, double tol) {
    return a.size() == b.size() && dist_inf(a, b) <= tol;
}

inline const DenseTensor& pick(const TensorPair& p, int k) { return k == 1 ? p.a1() : p.a2(); }

struct FactRunner {
    const PaperExample& ex;
    const SearchConfig& scfg;
    const SolverConfig& vcfg;
    FactResult& out;

    void operator()(const PowerValueFact& f) const {
        const Vector v = power_apply(pick(ex.pair, f.tensor), f.x);
        out.passed = close(v, f.expected, 1e-12);
        out.observed = "A" + std::to_string(f.tensor) + " x^{m-1} = " + fmt(v);
    }

    void operator()(const ComponentValueFact& f) const {
        const ClassEvaluation ev = evaluate_class(ex.pair, f.cls, f.point);
        out.passed = close(ev.components, f.expected_components, 1e-12);
        if (f.expected_image1)
            out.passed = out.passed && close(ev.image1, *f.expected_image1, 1e-12);
        if (f.expected_image2)
            out.passed = out.passed && close(ev.image2, *f.expected_image2, 1e-12);
        out.observed = "components " + fmt(ev.components) + ", images " + fmt(ev.image1) + " / " + fmt(ev.image2);
    }

    void operator()(const ClassFact& f) const {
        ClassVerdict v = check_pair_class(ex.pair, f.cls, scfg);
        std::ostringstream ss;
        ss << to_string(f.cls) << ": " << to_string(v.outcome);
        if (f.violated) {
            bool ok = v.violated() && recheck_certificate(ex.pair, v, scfg);
            if (v.certificate)
                ss << " at " << fmt_point(v.certificate->point) << " (value " << v.certificate->value << ")";
            if (f.stated_point) {
                const bool stated = make_certificate(ex.pair, f.cls, *f.stated_point, scfg).has_value();
                ss << "; stated point " << (stated ? "re-verifies" : "does NOT re-verify");
                ok = ok && stated;
            }
            out.passed = ok;
        } else {
            out.passed = v.undetermined();
            ss << " after " << v.effort.lattice_points << " lattice points and " << v.effort.starts
               << " starts (best value " << v.effort.best_value << ")";
        }
        out.observed = ss.str();
        out.verdict = std::move(v);
    }

    void operator()(const RTensorFact& f) const {
        ClassVerdict v = is_r_tensor(pick(ex.pair, f.tensor), scfg);
        out.passed = v.undetermined();
        out.observed = "R-tensor check: " + std::string(to_string(v.outcome));
        out.verdict = std::move(v);
    }

    void operator()(const ZTensorFact& f) const {
        const bool z = is_z_tensor(pick(ex.pair, f.tensor));
        out.passed = z == f.expected;
        out.observed = std::string("is_z_tensor(A") + std::to_string(f.tensor) + ") = " + (z ? "true" : "false");
    }

    void operator()(const SemiPositiveFact& f) const {
        const double stated = semi_positive_margin(ex.pair, f.witness);
        ClassVerdict v = semi_positive_witness(ex.pair, scfg);
        out.passed = stated > 0.0 && v.holds();
        std::ostringstream ss;
        ss << "stated witness margin " << stated << "; search: " << to_string(v.outcome);
        if (v.certificate)
            ss << " with " << fmt_point(v.certificate->point);
        out.observed = ss.str();
        out.verdict = std::move(v);
    }

    void operator()(const SolutionFact& f) const {
        const VtcpInstance inst(ex.pair, f.q1, f.q2);
        constexpr double tol = 1e-8;
        std::ostringstream ss;
        bool ok = true;
        for (SolveMethod m : f.methods) {
            ss << (ss.tellp() > 0 ? "; " : "") << to_string(m) << ": ";
            if (m == SolveMethod::Oracle) {
                const OracleResult o = solve_oracle(inst, vcfg);
                std::vector<Vector> kept;
                for (const auto& s : o.solutions)
                    if (!f.positive_only || std::all_of(s.begin(), s.end(), [](double v) { return v > 0.0; }))
                        kept.push_back(s);
                const bool good = kept.size() == 1 && close(kept.front(), f.expected, tol);
                ok = ok && good;
                ss << o.solutions.size() << " solution(s)";
                if (f.positive_only)
                    ss << ", " << kept.size() << " positive";
                for (const auto& s : kept)
                    ss << ' ' << fmt(s);
                continue;
            }
            SolveReport r = m == SolveMethod::Newton     ? solve_newton(inst, f.x0, vcfg)
                            : m == SolveMethod::Homotopy ? solve_homotopy(inst, vcfg)
                                                         : solve_mtensor(inst, vcfg, scfg);
            bool good = r.converged() && close(r.x, f.expected, tol);
            if (m == SolveMethod::MTensor)
                for (const auto& it : r.iterates)
                    good = good && std::all_of(it.begin(), it.end(), [](double v) { return v > 0.0; });
            ok = ok && good;
            ss << to_string(r.status) << ' ' << fmt(r.x);
        }
        out.passed = ok;
        out.observed = ss.str();
    }
};

} // namespace detail

inline ReproductionReport reproduce(const PaperExample& ex, const SearchConfig& scfg = {},
                                    const SolverConfig& vcfg = {}) {
    ReproductionReport rep;
    rep.id = ex.id;
    for (const Fact& fact : ex.facts) {
        FactResult r;
        r.claim = fact.claim;
        r.citation = fact.citation;
        try {
            std::visit(detail::FactRunner{ex, scfg, vcfg, r}, fact.body);
        } catch (const std::exception& e) {
            r.passed = false;
            r.observed = std::string("error: ") + e.what();
        }
        rep.facts.push_back(std::move(r));
    }
    return rep;
}

inline ReproductionReport reproduce(std::string_view id, const SearchConfig& scfg = {},
                                    const SolverConfig& vcfg = {}) {
    return reproduce(find_example(id), scfg, vcfg);
}

} // namespace vtcp
