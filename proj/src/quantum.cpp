#include "qnsem/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qnsem {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

Region reflect(const Region& r) { return {1.0 - r.hi, 1.0 - r.lo, r.hi_open, r.lo_open}; }

// Designated and undesignated parts of a region.
Region d_part(const Region& r, double alpha) { return r.intersect(Region::closed(alpha, 1.0)); }
Region n_part(const Region& r, double alpha) { return r.intersect({0.0, alpha, false, true}); }

// Image of [max(a,b), 1].
Region upper_closure(const Region& ra, const Region& rb) {
    double lo;
    bool attained;
    if (ra.lo > rb.lo) {
        lo = ra.lo;
        attained = !ra.lo_open;
    } else if (rb.lo > ra.lo) {
        lo = rb.lo;
        attained = !rb.lo_open;
    } else {
        lo = ra.lo;
        attained = !ra.lo_open && !rb.lo_open;
    }
    return {lo, 1.0, !attained, false};
}

// Image of [floor, min(a,b)].
Region lower_closure(const Region& ra, const Region& rb, double floor, bool floor_open = false) {
    double hi;
    bool attained;
    if (ra.hi < rb.hi) {
        hi = ra.hi;
        attained = !ra.hi_open;
    } else if (rb.hi < ra.hi) {
        hi = rb.hi;
        attained = !rb.hi_open;
    } else {
        hi = ra.hi;
        attained = !ra.hi_open && !rb.hi_open;
    }
    return {floor, hi, floor_open, !attained};
}

// Image of {min(a+b, 1)}.
Region clipped_sum(const Region& ra, const Region& rb) {
    Region s{ra.lo + rb.lo, ra.hi + rb.hi, ra.lo_open || rb.lo_open, ra.hi_open || rb.hi_open};
    if (s.lo > 1.0 || (s.lo == 1.0 && s.lo_open)) return Region::point(1.0);
    if (s.hi >= 1.0) return {s.lo, 1.0, s.lo_open, false};
    return s;
}

bool in_d(double a, double alpha) { return a >= alpha - kMembershipTol; }

UnaryRule deterministic_negation() {
    return {"{1-a}", [](double a) { return IntervalUnion::point(std::clamp(1.0 - a, 0.0, 1.0)); },
            [](const Region& r) { return RegionUnion{reflect(r)}; }};
}

UnaryRule neg1_rule(double alpha) {
    return {"a in D: [0, 1-a]; a not in D: [1-a, 1]",
            [alpha](double a) {
                const double c = std::clamp(1.0 - a, 0.0, 1.0);
                return in_d(a, alpha) ? IntervalUnion::closed(0.0, c) : IntervalUnion::closed(c, 1.0);
            },
            [alpha](const Region& r) {
                RegionUnion out;
                const Region d = d_part(r, alpha);
                const Region n = n_part(r, alpha);
                if (!d.empty()) out.push_back({0.0, 1.0 - d.lo, false, d.lo_open});
                if (!n.empty()) out.push_back({1.0 - n.hi, 1.0, n.hi_open, false});
                return out;
            }};
}

UnaryRule neg2_rule(double alpha) {
    const double k = (1.0 - alpha) / alpha;
    return {"a in D: [alpha - (a/2)k, alpha); a not in D: [alpha, alpha + (a/2)k]; k = (1-alpha)/alpha",
            [alpha, k](double a) {
                if (in_d(a, alpha)) return IntervalUnion::closed(alpha - 0.5 * a * k, alpha - kOpenEndGap);
                return IntervalUnion::closed(alpha, std::min(1.0, alpha + 0.5 * a * k));
            },
            [alpha, k](const Region& r) {
                RegionUnion out;
                const Region d = d_part(r, alpha);
                const Region n = n_part(r, alpha);
                if (!d.empty()) out.push_back({alpha - 0.5 * d.hi * k, alpha, d.hi_open, true});
                if (!n.empty()) out.push_back({alpha, alpha + 0.5 * n.hi * k, false, n.hi_open});
                return out;
            }};
}

BinaryRule quantum_disjunction() {
    return {"orthogonal: {min(a+b, 1)}; non-orthogonal: [max(a,b), 1]",
            [](Relation rel, double a, double b) {
                if (rel == Relation::Orthogonal) return IntervalUnion::point(std::min(a + b, 1.0));
                return IntervalUnion::closed(std::max(a, b), 1.0);
            },
            [](Relation rel, const Region& ra, const Region& rb) {
                if (ra.empty() || rb.empty()) return RegionUnion{};
                return RegionUnion{rel == Relation::Orthogonal ? clipped_sum(ra, rb) : upper_closure(ra, rb)};
            }};
}

BinaryRule quantum_conjunction() {
    return {"orthogonal: {0}; non-orthogonal: [0, min(a,b)]",
            [](Relation rel, double a, double b) {
                if (rel == Relation::Orthogonal) return IntervalUnion::point(0.0);
                return IntervalUnion::closed(0.0, std::min(a, b));
            },
            [](Relation rel, const Region& ra, const Region& rb) {
                if (ra.empty() || rb.empty()) return RegionUnion{};
                return RegionUnion{rel == Relation::Orthogonal ? Region::point(0.0) : lower_closure(ra, rb, 0.0)};
            }};
}

}  // namespace

const char* variant_name(NegationVariant v) {
    switch (v.kind) {
        case NegationVariant::Kind::Deterministic: return "deterministic";
        case NegationVariant::Kind::Neg1: return "neg1";
        case NegationVariant::Kind::Neg2: return "neg2";
    }
    return "?";
}

NegationVariant variant_from_name(const std::string& name) {
    for (auto v : {NegationVariant::deterministic(), NegationVariant::neg1(), NegationVariant::neg2()})
        if (name == variant_name(v)) return v;
    throw Error("unknown negation variant '" + name + "' (expected deterministic, neg1 or neg2)");
}

IntervalNMatrix quantum_nmatrix(double alpha, NegationVariant negation) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0,1], got " + fmt(alpha));
    UnaryRule neg;
    switch (negation.kind) {
        case NegationVariant::Kind::Deterministic: neg = deterministic_negation(); break;
        case NegationVariant::Kind::Neg1: neg = neg1_rule(alpha); break;
        case NegationVariant::Kind::Neg2:
            if (!(alpha > 0.5 && alpha < 1.0)) throw Error("neg2 needs alpha in (1/2, 1), got " + fmt(alpha));
            neg = neg2_rule(alpha);
            break;
    }
    return IntervalNMatrix(std::string("quantum/") + variant_name(negation), alpha, std::move(neg),
                           quantum_conjunction(), quantum_disjunction());
}

IntervalNMatrix adequate_restricted_tables(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must lie in (0,1], got " + fmt(alpha));
    BinaryRule conj{
        "a, b in D: [alpha, min(a,b)]; otherwise [0, min(a,b)]",
        [alpha](Relation, double a, double b) {
            const double m = std::min(a, b);
            if (in_d(a, alpha) && in_d(b, alpha)) return IntervalUnion::closed(std::min(alpha, m), m);
            return IntervalUnion::closed(0.0, m);
        },
        [alpha](Relation, const Region& ra, const Region& rb) {
            RegionUnion out;
            const Region parts_a[] = {d_part(ra, alpha), n_part(ra, alpha)};
            const Region parts_b[] = {d_part(rb, alpha), n_part(rb, alpha)};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    if (parts_a[i].empty() || parts_b[j].empty()) continue;
                    out.push_back(lower_closure(parts_a[i], parts_b[j], i == 0 && j == 0 ? alpha : 0.0));
                }
            return out;
        }};
    BinaryRule disj{"[max(a,b), 1]",
                    [](Relation, double a, double b) { return IntervalUnion::closed(std::max(a, b), 1.0); },
                    [](Relation, const Region& ra, const Region& rb) {
                        if (ra.empty() || rb.empty()) return RegionUnion{};
                        return RegionUnion{upper_closure(ra, rb)};
                    }};
    return IntervalNMatrix("restricted", alpha, neg1_rule(alpha), std::move(conj), std::move(disj));
}

// ---------------------------------------------------------------------------

Denotation::Denotation(Bindings bindings, double tol) : bindings_(std::move(bindings)), tol_(tol) {
    for (const auto& [name, p] : bindings_) {
        if (dim_ == 0) dim_ = p.dim();
        if (p.dim() != dim_) {
            throw Error("binding '" + name + "' has dimension " + std::to_string(p.dim()) + ", expected " +
                        std::to_string(dim_));
        }
    }
}

const Projector& Denotation::operator()(const Formula& f) {
    if (f.is_atom()) {
        auto it = bindings_.find(f.name());
        if (it == bindings_.end()) throw Error("atom '" + f.name() + "' is not bound");
        return it->second;
    }
    const std::string key = render(f);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    Projector p;
    switch (f.kind()) {
        case Connective::Not: p = ortho((*this)(f.left())); break;
        case Connective::And: p = meet((*this)(f.left()), (*this)(f.right()), tol_); break;
        case Connective::Or: p = join((*this)(f.left()), (*this)(f.right()), tol_); break;
        case Connective::Atom: break;
    }
    return cache_.emplace(key, std::move(p)).first->second;
}

RelationVerdict classify_relation(const Projector& p, const Projector& q, double tol) {
    if (p.matrix().max_abs() <= tol || q.matrix().max_abs() <= tol) return RelationVerdict::Orthogonal;
    const double n = overlap_norm(p, q);
    if (n <= tol) return RelationVerdict::Orthogonal;
    if (n <= 10.0 * tol) return RelationVerdict::Ambiguous;
    return RelationVerdict::NonOrthogonal;
}

RelationOracle projector_oracle(std::shared_ptr<Denotation> denote) {
    return [denote](const Formula& a, const Formula& b) {
        return classify_relation((*denote)(a), (*denote)(b), denote->tol());
    };
}

RealValuation evaluate_state(const DensityOperator& rho, Denotation& denote, const std::vector<Formula>& formulas) {
    RealValuation v(Domain::closure_of(formulas), 0.0);
    for (std::size_t i = 0; i < v.domain().size(); ++i) v[i] = born(rho, denote(v.domain().formulas()[i]), denote.tol());
    return v;
}

RealValuation evaluate_state(const DensityOperator& rho, const Bindings& bindings,
                             const std::vector<Formula>& formulas, double tol) {
    Denotation d(bindings, tol);
    return evaluate_state(rho, d, formulas);
}

// ---------------------------------------------------------------------------

namespace {

CVector basis(std::size_t dim, std::size_t i) {
    CVector e(dim, 0.0);
    e[i] = 1.0;
    return e;
}

}  // namespace

DynamicWitness dynamic_witness(double alpha, double beta, double gamma, double delta, double epsilon) {
    for (double c : {alpha, beta, gamma, delta}) {
        if (!(c > 0.0)) throw Error("witness coefficients must be positive");
    }
    if (std::abs(alpha + beta + gamma + delta - 1.0) > kDefaultTol) throw Error("witness coefficients must sum to 1");
    if (!(epsilon > 0.0 && epsilon < std::min({alpha, beta, gamma, delta}))) {
        throw Error("epsilon must satisfy 0 < epsilon < min(alpha, beta, gamma, delta)");
    }
    const CVector a = basis(4, 0), b = basis(4, 1), c = basis(4, 2);
    const CVector psi = {std::sqrt(alpha), std::sqrt(beta), std::sqrt(gamma), std::sqrt(delta)};
    const CVector psi_eps = {std::sqrt(alpha + epsilon), std::sqrt(beta - epsilon), std::sqrt(gamma + epsilon),
                             std::sqrt(delta - epsilon)};
    Bindings bind = {{"P", Projector::from_orthonormal({a, b}, 4)}, {"Q", Projector::from_orthonormal({b, c}, 4)}};
    const Formula P = Formula::atom("P"), Q = Formula::atom("Q");
    std::vector<Formula> formulas = {P & Q, P | Q};
    Denotation d(bind);
    auto rho = DensityOperator::pure(psi);
    auto rho_eps = DensityOperator::pure(psi_eps);
    auto v = evaluate_state(rho, d, formulas);
    auto v_eps = evaluate_state(rho_eps, d, formulas);
    return {alpha, beta, gamma, delta, epsilon, rho, rho_eps, std::move(bind), formulas, std::move(v), std::move(v_eps)};
}

StaticWitness static_violation_witness() {
    const CVector a = basis(3, 0), b = basis(3, 1), c = basis(3, 2);
    const double s = 1.0 / std::sqrt(2.0);
    const CVector phi = {s, s, 0.0};
    Bindings bind = {{"P", Projector::from_orthonormal({a}, 3)},
                     {"Q", Projector::from_orthonormal({phi}, 3)},
                     {"P2", Projector::from_orthonormal({c}, 3)},
                     {"Q2", Projector::from_orthonormal({phi}, 3)}};
    const Formula P = Formula::atom("P"), Q = Formula::atom("Q");
    const Formula P2 = Formula::atom("P2"), Q2 = Formula::atom("Q2");
    std::vector<Formula> formulas = {P | Q, P2 | Q2};
    auto state = DensityOperator::pure(b);
    auto v = evaluate_state(state, bind, formulas);
    auto report = is_static(v);
    return {state, std::move(bind), formulas, std::move(v), std::move(report)};
}

OrderReport order_preservation_check(const RealValuation& v, Denotation& denote, double tol) {
    OrderReport r;
    const Domain& d = v.domain();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const Projector& p = denote(d.formulas()[i]);
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (i == j) continue;
            const Projector& q = denote(d.formulas()[j]);
            if (leq(p, q, tol)) {
                ++r.ordered_pairs;
                if (v[i] > v[j] + tol) r.violations.push_back({d.text(i), d.text(j), v[i], v[j], "order"});
            }
            if (i < j && classify_relation(p, q, tol) == RelationVerdict::Orthogonal) {
                ++r.orthogonal_pairs;
                if (v[i] + v[j] > 1.0 + tol) r.violations.push_back({d.text(i), d.text(j), v[i], v[j], "orthogonal sum"});
            }
        }
    }
    return r;
}

DoubleNegationReport double_negation_chain(double alpha, double a, double b) {
    if (!(alpha > 0.5 && alpha <= 1.0)) throw Error("double negation chain needs alpha in (1/2, 1]");
    if (!(a >= alpha && a <= 1.0)) throw Error("a must be designated: a in [alpha, 1]");
    if (!(b >= 0.0 && b <= 1.0 - a)) throw Error("b must lie in the negation set [0, 1-a]");
    DoubleNegationReport r{alpha, a, b, {0.0, b, 1.0 - a, alpha, a, 1.0 - b, 1.0}};
    r.chain_holds = std::is_sorted(r.chain.begin(), r.chain.end());
    const auto m = quantum_nmatrix(alpha, NegationVariant::neg1());
    r.first = m.negation().apply(a);
    r.second = m.negation().apply(b);
    r.second_above_start = r.second.lower() >= a;
    return r;
}

}  // namespace qnsem
