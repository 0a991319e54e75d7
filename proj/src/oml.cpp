#include "qnsem/oml.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "qnsem/quantum.hpp"

namespace qnsem {
namespace {

constexpr std::size_t kMaxFailures = 50;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

FiniteOML::FiniteOML(std::vector<std::string> elements, const std::vector<std::pair<std::size_t, std::size_t>>& leq,
                     std::vector<std::size_t> ortho, std::size_t bottom, std::size_t top)
    : names_(std::move(elements)), ortho_(std::move(ortho)), bottom_(bottom), top_(top) {
    const std::size_t n = names_.size();
    if (n == 0) throw Error("lattice needs at least one element");
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(names_[i], i).second) throw Error("duplicate lattice element '" + names_[i] + "'");
    }
    if (ortho_.size() != n) throw Error("orthocomplement must be defined on every element");
    for (auto o : ortho_)
        if (o >= n) throw Error("orthocomplement refers to an unknown element");
    if (bottom_ >= n || top_ >= n) throw Error("bottom or top is not an element");
    leq_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = 1;
    for (const auto& [a, b] : leq) {
        if (a >= n || b >= n) throw Error("order pair refers to an unknown element");
        leq_[a * n + b] = 1;
    }
    meet_.assign(n * n, npos);
    join_.assign(n * n, npos);
    std::vector<std::size_t> bounds;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            // greatest lower bound: a lower bound above every other lower bound
            bounds.clear();
            for (std::size_t z = 0; z < n; ++z)
                if (this->leq(z, x) && this->leq(z, y)) bounds.push_back(z);
            std::size_t found = npos;
            for (auto g : bounds) {
                if (std::all_of(bounds.begin(), bounds.end(), [&](std::size_t z) { return this->leq(z, g); })) {
                    found = found == npos ? g : npos - 1;
                }
            }
            meet_[x * n + y] = found == npos - 1 ? npos : found;
            bounds.clear();
            for (std::size_t z = 0; z < n; ++z)
                if (this->leq(x, z) && this->leq(y, z)) bounds.push_back(z);
            found = npos;
            for (auto g : bounds) {
                if (std::all_of(bounds.begin(), bounds.end(), [&](std::size_t z) { return this->leq(g, z); })) {
                    found = found == npos ? g : npos - 1;
                }
            }
            join_[x * n + y] = found == npos - 1 ? npos : found;
        }
    }
}

std::size_t FiniteOML::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown lattice element '" + name + "'");
    return it->second;
}

OMLReport verify_oml(const FiniteOML& l) {
    OMLReport r;
    auto fail = [&](const std::string& msg) {
        if (r.failures.size() < kMaxFailures) r.failures.push_back(msg);
        ++r.failure_count;
    };
    const std::size_t n = l.size();
    auto nm = [&](std::size_t i) { return l.name(i); };
    for (std::size_t x = 0; x < n; ++x) {
        if (!l.leq(l.bottom(), x)) fail("bottom is not below " + nm(x));
        if (!l.leq(x, l.top())) fail(nm(x) + " is not below top");
        for (std::size_t y = 0; y < n; ++y) {
            if (x != y && l.leq(x, y) && l.leq(y, x)) fail("antisymmetry fails for " + nm(x) + ", " + nm(y));
            if (!l.leq(x, y)) continue;
            for (std::size_t z = 0; z < n; ++z)
                if (l.leq(y, z) && !l.leq(x, z))
                    fail("transitivity fails for " + nm(x) + " <= " + nm(y) + " <= " + nm(z));
        }
    }
    bool lattice = true;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (l.meet_or_npos(x, y) == FiniteOML::npos) {
                fail("no unique meet for " + nm(x) + ", " + nm(y));
                lattice = false;
            }
            if (l.join_or_npos(x, y) == FiniteOML::npos) {
                fail("no unique join for " + nm(x) + ", " + nm(y));
                lattice = false;
            }
        }
    for (std::size_t x = 0; x < n; ++x) {
        const std::size_t xp = l.ortho(x);
        if (l.ortho(xp) != x) fail("orthocomplement is not involutive at " + nm(x));
        if (lattice && l.join_or_npos(x, xp) != l.top()) fail(nm(x) + " v " + nm(xp) + " is not top");
        if (lattice && l.meet_or_npos(x, xp) != l.bottom()) fail(nm(x) + " & " + nm(xp) + " is not bottom");
        for (std::size_t y = 0; y < n; ++y) {
            if (!l.leq(x, y)) continue;
            if (!l.leq(l.ortho(y), xp)) fail("orthocomplement does not reverse " + nm(x) + " <= " + nm(y));
            if (!lattice) continue;
            const std::size_t m = l.meet_or_npos(y, xp);
            if (l.join_or_npos(x, m) != y) fail("orthomodular law fails for " + nm(x) + " <= " + nm(y));
        }
    }
    return r;
}

std::size_t meet_oml(const FiniteOML& l, std::size_t x, std::size_t y) {
    const auto m = l.meet_or_npos(x, y);
    if (m == FiniteOML::npos) throw Error("meet of " + l.name(x) + " and " + l.name(y) + " does not exist");
    return m;
}

std::size_t join_oml(const FiniteOML& l, std::size_t x, std::size_t y) {
    const auto j = l.join_or_npos(x, y);
    if (j == FiniteOML::npos) throw Error("join of " + l.name(x) + " and " + l.name(y) + " does not exist");
    return j;
}

FiniteOML from_greechie(const std::vector<std::string>& atoms, const std::vector<std::vector<std::string>>& blocks) {
    std::map<std::string, std::size_t> atom_index;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!atom_index.emplace(atoms[i], i).second) throw Error("duplicate atom '" + atoms[i] + "'");
    }
    if (blocks.empty()) throw Error("Greechie diagram needs at least one block");
    std::vector<std::vector<std::string>> sorted_blocks;
    for (const auto& b : blocks) {
        if (b.empty() || b.size() > 20) throw Error("blocks must have between 1 and 20 atoms");
        for (const auto& a : b)
            if (!atom_index.count(a)) throw Error("block refers to unknown atom '" + a + "'");
        auto s = b;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Error("block repeats an atom");
        sorted_blocks.push_back(std::move(s));
    }

    auto key = [](const std::vector<std::string>& block, unsigned long mask) -> std::string {
        const std::size_t k = block.size();
        const auto count = static_cast<std::size_t>(__builtin_popcountl(mask));
        if (count == 0) return "0";
        if (count == k) return "1";
        if (count == 1) {
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1u) return block[i];
        }
        if (count + 1 == k) {
            for (std::size_t i = 0; i < k; ++i)
                if (!(mask >> i & 1u)) return "~" + block[i];
        }
        std::string out;
        for (std::size_t i = 0; i < k; ++i) {
            if (!(mask >> i & 1u)) continue;
            if (!out.empty()) out += "+";
            out += block[i];
        }
        return out;
    };

    std::vector<std::string> names = {"0", "1"};
    std::map<std::string, std::size_t> index = {{"0", 0}, {"1", 1}};
    auto id = [&](const std::string& k) {
        auto [it, fresh] = index.emplace(k, names.size());
        if (fresh) names.push_back(k);
        return it->second;
    };
    std::set<std::pair<std::size_t, std::size_t>> order;
    std::map<std::size_t, std::size_t> ortho;
    for (const auto& b : sorted_blocks) {
        const unsigned long full = (1ul << b.size()) - 1;
        std::vector<std::size_t> ids(full + 1);
        for (unsigned long m = 0; m <= full; ++m) ids[m] = id(key(b, m));
        for (unsigned long m = 0; m <= full; ++m) {
            const std::size_t comp = ids[full & ~m];
            auto [it, fresh] = ortho.emplace(ids[m], comp);
            if (!fresh && it->second != comp) {
                throw Error("blocks disagree on the complement of '" + names[ids[m]] + "'");
            }
            for (unsigned long s = m;; s = (s - 1) & m) {
                order.emplace(ids[s], ids[m]);
                if (s == 0) break;
            }
        }
    }
    const std::size_t n = names.size();
    std::vector<char> leq(n * n, 0);
    for (const auto& [a, b] : order) leq[a * n + b] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!leq[i * n + k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (leq[k * n + j]) leq[i * n + j] = 1;
        }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (leq[i * n + j]) pairs.emplace_back(i, j);
    std::vector<std::size_t> perp(n);
    for (std::size_t i = 0; i < n; ++i) perp[i] = ortho.at(i);
    return FiniteOML(std::move(names), pairs, std::move(perp), 0, 1);
}

FiniteOML boolean_algebra(std::size_t n) {
    if (n == 0 || n > 26) throw Error("Boolean algebra needs between 1 and 26 atoms");
    std::vector<std::string> atoms;
    for (std::size_t i = 0; i < n; ++i) atoms.emplace_back(1, static_cast<char>('a' + i));
    return from_greechie(atoms, {atoms});
}

FiniteOML mo2() { return from_greechie({"a", "a_perp", "b", "b_perp"}, {{"a", "a_perp"}, {"b", "b_perp"}}); }

ProjectorFragment close_projector_fragment(const std::vector<Projector>& generators, double tol,
                                           std::size_t max_size) {
    if (generators.empty()) throw Error("fragment needs at least one generator");
    const std::size_t d = generators.front().dim();
    const double eq_tol = std::max(tol, 1e-7);
    std::vector<Projector> elems = {Projector::zero(d), Projector::identity(d)};
    auto find = [&](const Projector& p) -> std::size_t {
        for (std::size_t i = 0; i < elems.size(); ++i)
            if (approx_equal(elems[i], p, eq_tol)) return i;
        return FiniteOML::npos;
    };
    auto add = [&](const Projector& p) {
        if (p.dim() != d) throw Error("fragment generators have different dimensions");
        if (find(p) != FiniteOML::npos) return false;
        if (elems.size() >= max_size) throw Error("projector fragment exceeds " + std::to_string(max_size) + " elements");
        elems.push_back(p);
        return true;
    };
    for (const auto& g : generators) add(g);
    for (bool grew = true; grew;) {
        grew = false;
        const std::size_t n = elems.size();
        for (std::size_t i = 0; i < n; ++i) {
            grew |= add(ortho(elems[i]));
            for (std::size_t j = i + 1; j < n; ++j) {
                grew |= add(meet(elems[i], elems[j], tol));
                grew |= add(join(elems[i], elems[j], tol));
            }
        }
    }
    const std::size_t n = elems.size();
    std::vector<std::string> names = {"0", "1"};
    for (std::size_t i = 2; i < n; ++i) names.push_back("x" + std::to_string(i));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> perp(n);
    for (std::size_t i = 0; i < n; ++i) {
        perp[i] = find(ortho(elems[i]));
        for (std::size_t j = 0; j < n; ++j)
            if (leq(elems[i], elems[j], eq_tol)) pairs.emplace_back(i, j);
    }
    return {FiniteOML(std::move(names), pairs, std::move(perp), 0, 1), std::move(elems)};
}

// ---------------------------------------------------------------------------

double StateReport::max_residual() const {
    return std::max({zero_residual, top_residual, complement_residual, additivity_residual, range_residual});
}

StateReport verify_general_state(const FiniteOML& l, const std::vector<double>& mu) {
    if (mu.size() != l.size()) throw Error("state has " + std::to_string(mu.size()) + " values for " +
                                           std::to_string(l.size()) + " elements");
    StateReport r;
    r.zero_residual = std::abs(mu[l.bottom()]);
    r.top_residual = std::abs(mu[l.top()] - 1.0);
    for (std::size_t x = 0; x < l.size(); ++x) {
        r.range_residual = std::max({r.range_residual, -mu[x], mu[x] - 1.0});
        r.complement_residual = std::max(r.complement_residual, std::abs(mu[l.ortho(x)] - 1.0 + mu[x]));
        for (std::size_t y = x + 1; y < l.size(); ++y) {
            if (!l.orthogonal(x, y)) continue;
            const auto j = l.join_or_npos(x, y);
            if (j == FiniteOML::npos) continue;
            const double res = std::abs(mu[j] - mu[x] - mu[y]);
            if (res > r.additivity_residual) {
                r.additivity_residual = res;
                r.worst_pair = l.name(x) + " , " + l.name(y);
            }
        }
    }
    return r;
}

StateSearch find_state(const FiniteOML& l, std::size_t exact_limit) {
    LinearProblem p;
    for (const auto& nm : l.names()) p.add_variable("mu(" + nm + ")");
    using S = LinearConstraint::Sense;
    p.add({{{l.bottom(), 1.0}}, S::Eq, 0.0, "mu(0) = 0"});
    p.add({{{l.top(), 1.0}}, S::Eq, 1.0, "mu(1) = 1"});
    for (std::size_t x = 0; x < l.size(); ++x) {
        const std::size_t xp = l.ortho(x);
        if (xp < x) continue;
        p.add({{{x, 1.0}, {xp, 1.0}}, S::Eq, 1.0, "mu(" + l.name(x) + ") + mu(" + l.name(xp) + ") = 1"});
    }
    for (std::size_t x = 0; x < l.size(); ++x) {
        if (x == l.bottom()) continue;
        for (std::size_t y = x + 1; y < l.size(); ++y) {
            if (y == l.bottom() || !l.orthogonal(x, y)) continue;
            const auto j = join_oml(l, x, y);
            p.add({{{j, 1.0}, {x, -1.0}, {y, -1.0}},
                   S::Eq,
                   0.0,
                   "mu(" + l.name(x) + " v " + l.name(y) + ") = mu(" + l.name(x) + ") + mu(" + l.name(y) + ")"});
        }
    }
    StateSearch s{solve_feasibility(p, l.size() <= exact_limit), std::nullopt};
    if (s.lp.feasible) s.state = s.lp.point;
    return s;
}

TwoValuedSearch find_two_valued_valuation(const FiniteOML& l, bool count_all, std::size_t cap) {
    const std::size_t n = l.size();
    // (kind, x, y, z): 0 join, 1 meet, 2 ortho, 3 top; checked at max index
    struct C {
        int kind;
        std::size_t x, y, z;
    };
    std::vector<std::vector<C>> at(n);
    auto attach = [&](C c) { at[std::max({c.x, c.y, c.z})].push_back(c); };
    for (std::size_t x = 0; x < n; ++x) {
        attach({2, x, x, l.ortho(x)});
        for (std::size_t y = x + 1; y < n; ++y) {
            attach({0, x, y, join_oml(l, x, y)});
            attach({1, x, y, meet_oml(l, x, y)});
        }
    }
    attach({3, l.top(), l.top(), l.top()});
    TwoValuedSearch out;
    std::vector<int> v(n, 0);
    auto holds = [&](const C& c) {
        switch (c.kind) {
            case 0: return v[c.z] == (v[c.x] | v[c.y]);
            case 1: return v[c.z] == (v[c.x] & v[c.y]);
            case 2: return v[c.z] == 1 - v[c.x];
            default: return v[c.z] == 1;
        }
    };
    std::function<bool(std::size_t)> step = [&](std::size_t i) -> bool {
        if (i == n) {
            ++out.count;
            if (out.solutions.size() < 64) out.solutions.push_back(v);
            return count_all && out.count < cap;
        }
        for (int b = 0; b < 2; ++b) {
            v[i] = b;
            if (std::all_of(at[i].begin(), at[i].end(), holds) && !step(i + 1)) return false;
        }
        return true;
    };
    out.exhausted = step(0);
    if (!count_all && out.count > 0) out.exhausted = false;
    return out;
}

// ---------------------------------------------------------------------------

OMLTables general_quantum_tables(const FiniteOML& l, double alpha) {
    return {std::make_shared<const FiniteOML>(l), quantum_nmatrix(alpha, NegationVariant::deterministic())};
}

std::size_t denote_oml(const FiniteOML& l, const std::map<std::string, std::size_t>& bindings, const Formula& f) {
    switch (f.kind()) {
        case Connective::Atom: {
            auto it = bindings.find(f.name());
            if (it == bindings.end()) throw Error("atom '" + f.name() + "' is not bound");
            if (it->second >= l.size()) throw Error("atom '" + f.name() + "' is bound to an unknown element");
            return it->second;
        }
        case Connective::Not: return l.ortho(denote_oml(l, bindings, f.left()));
        case Connective::And: return meet_oml(l, denote_oml(l, bindings, f.left()), denote_oml(l, bindings, f.right()));
        case Connective::Or: return join_oml(l, denote_oml(l, bindings, f.left()), denote_oml(l, bindings, f.right()));
    }
    throw Error("unreachable formula kind");
}

RelationOracle oml_oracle(std::shared_ptr<const FiniteOML> l, std::map<std::string, std::size_t> bindings) {
    return [l, bindings](const Formula& a, const Formula& b) {
        return l->orthogonal(denote_oml(*l, bindings, a), denote_oml(*l, bindings, b)) ? RelationVerdict::Orthogonal
                                                                                     : RelationVerdict::NonOrthogonal;
    };
}

std::vector<TableInstance> all_instances(const FiniteOML& l) {
    std::vector<TableInstance> out;
    for (std::size_t x = 0; x < l.size(); ++x) {
        out.push_back({TableOp::Not, x, x, l.ortho(x)});
        for (std::size_t y = x; y < l.size(); ++y) {
            out.push_back({TableOp::And, x, y, meet_oml(l, x, y)});
            out.push_back({TableOp::Or, x, y, join_oml(l, x, y)});
        }
    }
    return out;
}

std::vector<TableInstance> instances_from_formulas(const FiniteOML& l,
                                                   const std::map<std::string, std::size_t>& bindings,
                                                   const std::vector<Formula>& formulas) {
    std::vector<TableInstance> out;
    for (const auto& f : subformula_closure(formulas)) {
        if (f.is_atom()) continue;
        const std::size_t z = denote_oml(l, bindings, f);
        const std::size_t x = denote_oml(l, bindings, f.left());
        const std::size_t y = f.kind() == Connective::Not ? x : denote_oml(l, bindings, f.right());
        out.push_back({table_op(f.kind()), x, y, z});
    }
    return out;
}

LegalityReport lattice_legality(const OMLTables& t, const std::vector<double>& values,
                                const std::vector<TableInstance>& instances, double tol) {
    const FiniteOML& l = *t.lattice;
    if (values.size() != l.size()) throw Error("valuation size does not match the lattice");
    LegalityReport r;
    for (const auto& in : instances) {
        const double a = values[in.x], b = values[in.y], z = values[in.z];
        IntervalUnion expected = IntervalUnion::point(0.0);
        std::string text;
        std::string note;
        if (in.op == TableOp::Not) {
            expected = t.matrix.negation().apply(a);
            text = "~(" + l.name(in.x) + ") = " + l.name(in.z);
        } else {
            const Relation rel = t.relation(in.x, in.y);
            expected = t.matrix.binary(in.op).apply(rel, a, b);
            text = l.name(in.x) + (in.op == TableOp::And ? " & " : " | ") + l.name(in.y) + " = " + l.name(in.z);
            note = relation_name(rel);
            if (in.op == TableOp::Or && rel == Relation::Orthogonal && a + b > 1.0 + tol) {
                r.violations.push_back({text, fmt(z), expected.to_string(), "orthogonal values sum past 1"});
                continue;
            }
        }
        if (!expected.contains(z, tol)) r.violations.push_back({text, fmt(z), expected.to_string(), note});
    }
    return r;
}

LegalSearch legal_valuation_search(const OMLTables& t, const std::map<std::size_t, double>& partial,
                                   const std::optional<std::vector<TableInstance>>& scope, std::size_t exact_limit) {
    const FiniteOML& l = *t.lattice;
    LinearProblem p;
    for (const auto& nm : l.names()) p.add_variable("v(" + nm + ")");
    using S = LinearConstraint::Sense;
    for (const auto& [e, x] : partial) {
        if (e >= l.size()) throw Error("pinned element index out of range");
        if (!(x >= 0.0 && x <= 1.0)) throw Error("pinned value " + fmt(x) + " for " + l.name(e) + " lies outside [0,1]");
        p.add({{{e, 1.0}}, S::Eq, x, "pin " + l.name(e) + " = " + fmt(x)});
    }
    const auto instances = scope ? *scope : all_instances(l);
    for (const auto& in : instances) {
        const std::string a = l.name(in.x), b = l.name(in.y), z = l.name(in.z);
        if (in.op == TableOp::Not) {
            p.add({{{in.z, 1.0}, {in.x, 1.0}}, S::Eq, 1.0, "v(" + z + ") = 1 - v(" + a + ")"});
            continue;
        }
        const bool orth = t.relation(in.x, in.y) == Relation::Orthogonal;
        if (in.op == TableOp::Or) {
            if (orth) {
                p.add({{{in.z, 1.0}, {in.x, -1.0}, {in.y, -1.0}}, S::Eq, 0.0,
                       "v(" + z + ") = v(" + a + ") + v(" + b + ")"});
            } else {
                p.add({{{in.x, 1.0}, {in.z, -1.0}}, S::Le, 0.0, "v(" + a + ") <= v(" + z + ")"});
                p.add({{{in.y, 1.0}, {in.z, -1.0}}, S::Le, 0.0, "v(" + b + ") <= v(" + z + ")"});
            }
        } else {
            if (orth) {
                p.add({{{in.z, 1.0}}, S::Eq, 0.0, "v(" + z + ") = 0"});
            } else {
                p.add({{{in.z, 1.0}, {in.x, -1.0}}, S::Le, 0.0, "v(" + z + ") <= v(" + a + ")"});
                p.add({{{in.z, 1.0}, {in.y, -1.0}}, S::Le, 0.0, "v(" + z + ") <= v(" + b + ")"});
            }
        }
    }
    LegalSearch s{solve_feasibility(p, l.size() <= exact_limit), std::nullopt};
    if (s.lp.feasible) s.valuation = s.lp.point;
    return s;
}

FiniteOML no_state_lattice() {
    // lines of Z3 x Z3: y = m x + c for m, c in Z3, and x = c
    std::vector<std::vector<std::pair<int, int>>> lines;
    for (int m = 0; m < 3; ++m)
        for (int c = 0; c < 3; ++c) {
            lines.emplace_back();
            for (int x = 0; x < 3; ++x) lines.back().emplace_back(x, (m * x + c) % 3);
        }
    for (int c = 0; c < 3; ++c) {
        lines.emplace_back();
        for (int y = 0; y < 3; ++y) lines.back().emplace_back(c, y);
    }
    auto flag = [](int x, int y, std::size_t line) {
        return "f" + std::to_string(x) + std::to_string(y) + "_" + std::to_string(line);
    };
    std::vector<std::string> atoms;
    std::vector<std::vector<std::string>> blocks;
    std::map<std::pair<int, int>, std::vector<std::string>> at_point;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        blocks.emplace_back();
        for (const auto& [x, y] : lines[k]) {
            atoms.push_back(flag(x, y, k));
            blocks.back().push_back(atoms.back());
            at_point[{x, y}].push_back(atoms.back());
        }
    }
    for (const auto& [pt, flags] : at_point) blocks.push_back(flags);
    return from_greechie(atoms, blocks);
}

}  // namespace qnsem
