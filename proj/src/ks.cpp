#include "qnsem/ks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qnsem {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

VectorContextFamily::VectorContextFamily(std::size_t dim, std::map<std::string, CVector> vectors,
                                         std::vector<std::vector<std::string>> contexts)
    : dim_(dim) {
    if (dim_ == 0) throw Error("family dimension must be positive");
    for (auto& [id, v] : vectors) {
        if (v.size() != dim_) {
            throw Error("vector '" + id + "' has " + std::to_string(v.size()) + " components, expected " +
                        std::to_string(dim_));
        }
        const double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) throw Error("vector '" + id + "' has zero or non-finite norm");
        for (auto& c : v) c /= n;
        ids_.push_back(id);
        vectors_.push_back(std::move(v));
    }
    for (const auto& c : contexts) {
        std::vector<std::size_t> idx;
        for (const auto& id : c) idx.push_back(index_of(id));
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) throw Error("context repeats a vector id");
        contexts_.push_back(std::move(idx));
    }
}

std::size_t VectorContextFamily::index_of(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw Error("context refers to unknown vector id '" + id + "'");
    return static_cast<std::size_t>(it - ids_.begin());
}

std::vector<std::vector<char>> VectorContextFamily::orthogonality(double tol) const {
    std::vector<std::vector<char>> g(size(), std::vector<char>(size(), 0));
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            g[i][j] = g[j][i] = std::abs(inner(vectors_[i], vectors_[j])) <= tol;
    return g;
}

ContextReport verify_contexts(const VectorContextFamily& f, double tol) {
    ContextReport r;
    for (std::size_t c = 0; c < f.contexts().size(); ++c) {
        const auto& ctx = f.contexts()[c];
        double ortho = 0.0;
        for (std::size_t a = 0; a < ctx.size(); ++a)
            for (std::size_t b = 0; b < ctx.size(); ++b) {
                const double expect = a == b ? 1.0 : 0.0;
                ortho = std::max(ortho, std::abs(inner(f.vector(ctx[a]), f.vector(ctx[b])) - expect));
            }
        ComplexMatrix sum = ComplexMatrix::zero(f.dim());
        for (auto i : ctx) sum = sum + ComplexMatrix::outer(f.vector(i), f.vector(i));
        const double res = (sum - ComplexMatrix::identity(f.dim())).max_abs();
        r.orthonormality.push_back(ortho);
        r.resolution.push_back(res);
        if (ctx.size() != f.dim()) {
            r.failures.push_back("context " + std::to_string(c) + " has " + std::to_string(ctx.size()) +
                                 " vectors in dimension " + std::to_string(f.dim()));
        }
        if (ortho > tol) r.failures.push_back("context " + std::to_string(c) + " is not orthonormal (" + fmt(ortho) + ")");
        if (res > tol && ctx.size() == f.dim()) {
            r.failures.push_back("context " + std::to_string(c) + " does not resolve the identity (" + fmt(res) + ")");
        }
    }
    return r;
}

namespace {

class KSSolver {
public:
    KSSolver(const VectorContextFamily& f, double tol, bool count_all, std::size_t cap)
        : f_(f), orth_(f.orthogonality(tol)), count_all_(count_all), cap_(cap) {}

    KSSearch run() {
        std::vector<int> v(f_.size(), -1);
        if (propagate(v)) search(v);
        return out_;
    }

private:
    bool set_one(std::vector<int>& v, std::size_t i) {
        if (v[i] == 0) return false;
        v[i] = 1;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (!orth_[i][j]) continue;
            if (v[j] == 1) return false;
            v[j] = 0;
        }
        return true;
    }

    // Forces the last open member of a context; false on conflict.
    bool propagate(std::vector<int>& v) {
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& ctx : f_.contexts()) {
                std::size_t ones = 0, open = 0, last = 0;
                for (auto i : ctx) {
                    if (v[i] == 1) ++ones;
                    if (v[i] == -1) {
                        ++open;
                        last = i;
                    }
                }
                if (ones > 1) return false;
                if (ones == 1) continue;
                if (open == 0) return false;
                if (open == 1) {
                    if (!set_one(v, last)) return false;
                    changed = true;
                }
            }
        }
        return true;
    }

    // Returns false once the search should stop.
    bool search(std::vector<int>& v) {
        ++out_.nodes;
        std::size_t best = f_.contexts().size(), best_open = 0;
        for (std::size_t c = 0; c < f_.contexts().size(); ++c) {
            std::size_t ones = 0, open = 0;
            for (auto i : f_.contexts()[c]) {
                ones += v[i] == 1;
                open += v[i] == -1;
            }
            if (ones == 0 && (best == f_.contexts().size() || open < best_open)) {
                best = c;
                best_open = open;
            }
        }
        if (best == f_.contexts().size()) {
            auto it = std::find(v.begin(), v.end(), -1);
            if (it == v.end()) return record(v);
            const auto i = static_cast<std::size_t>(it - v.begin());
            auto w = v;
            if (set_one(w, i) && !search(w)) return false;
            v[i] = 0;
            return search(v);
        }
        for (auto i : f_.contexts()[best]) {
            if (v[i] != -1) continue;
            auto w = v;
            if (set_one(w, i) && propagate(w) && !search(w)) return false;
        }
        return true;
    }

    bool record(const std::vector<int>& v) {
        ++out_.count;
        if (!out_.assignment) out_.assignment = v;
        if (!count_all_) return false;
        if (out_.count >= cap_) {
            out_.capped = true;
            return false;
        }
        return true;
    }

    const VectorContextFamily& f_;
    std::vector<std::vector<char>> orth_;
    bool count_all_;
    std::size_t cap_;
    KSSearch out_;
};

}  // namespace

KSSearch search_classical_valuation(const VectorContextFamily& f, double tol) {
    return KSSolver(f, tol, false, 1).run();
}

KSSearch count_solutions(const VectorContextFamily& f, std::size_t cap, double tol) {
    if (cap == 0) throw Error("count cap must be positive");
    return KSSolver(f, tol, true, cap).run();
}

bool satisfies_contexts(const VectorContextFamily& f, const Assignment01& v, double tol) {
    if (v.size() != f.size()) return false;
    for (int x : v)
        if (x != 0 && x != 1) return false;
    for (const auto& ctx : f.contexts()) {
        int ones = 0;
        for (auto i : ctx) ones += v[i];
        if (ones != 1) return false;
    }
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (v[i] == 1 && v[j] == 1 && std::abs(inner(f.vector(i), f.vector(j))) <= tol) return false;
    return true;
}

S3Report s3_check(const std::vector<Projector>& fragment, const Assignment01& v,
                  const std::vector<std::vector<std::size_t>>& contexts, double tol) {
    if (v.size() != fragment.size()) throw Error("assignment size does not match the fragment");
    const double eq_tol = std::max(tol, 1e-7);
    S3Report r;
    std::vector<std::size_t> perp(fragment.size());
    for (std::size_t i = 0; i < fragment.size(); ++i) {
        const Projector c = ortho(fragment[i]);
        auto it = std::find_if(fragment.begin(), fragment.end(), [&](const Projector& q) { return approx_equal(q, c, eq_tol); });
        if (it == fragment.end()) throw Error("fragment is not closed under orthocomplement (element " + std::to_string(i) + ")");
        perp[i] = static_cast<std::size_t>(it - fragment.begin());
    }
    for (std::size_t i = 0; i < fragment.size(); ++i) {
        if ((v[i] == 1) != (v[perp[i]] == 0)) {
            r.violations.push_back("v(" + std::to_string(i) + ")=" + std::to_string(v[i]) + " but v(perp)=" +
                                   std::to_string(v[perp[i]]));
        }
        if (v[i] != 1) continue;
        for (std::size_t j = 0; j < fragment.size(); ++j) {
            if (v[j] != 1 && leq(fragment[i], fragment[j], eq_tol)) {
                r.violations.push_back("v(" + std::to_string(i) + ")=1 and " + std::to_string(i) + " <= " +
                                       std::to_string(j) + " but v(" + std::to_string(j) + ")=0");
            }
        }
    }
    r.s3 = r.violations.empty();
    bool rank_one = false;
    for (std::size_t i = 0; i < fragment.size(); ++i) rank_one = rank_one || (v[i] == 1 && fragment[i].rank() == 1);
    r.ns3 = r.s3 && rank_one;
    if (r.s3 && !rank_one) r.violations.push_back("no rank-one projector is valued 1");
    bool exactly_one = true;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        int ones = 0;
        for (auto i : contexts[c]) {
            if (i >= v.size()) throw Error("context index out of range");
            ones += v[i] == 1;
        }
        if (ones != 1) {
            exactly_one = false;
            r.violations.push_back("context " + std::to_string(c) + " has " + std::to_string(ones) + " ones");
        }
    }
    r.rs3 = r.ns3 && exactly_one;
    return r;
}

VectorContextFamily cabello_family() {
    const std::vector<std::vector<std::vector<int>>> bases = {
        {{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}, {1, -1, 0, 0}},
        {{0, 0, 0, 1}, {0, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, -1, 0}},
        {{1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}},
        {{1, -1, 1, -1}, {1, 1, 1, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}},
        {{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 1}, {1, 0, 0, -1}},
        {{1, -1, -1, 1}, {1, 1, 1, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}},
        {{1, 1, -1, 1}, {1, 1, 1, -1}, {1, -1, 0, 0}, {0, 0, 1, 1}},
        {{1, 1, -1, 1}, {-1, 1, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, -1}},
        {{1, 1, 1, -1}, {-1, 1, 1, 1}, {1, 0, 0, 1}, {0, 1, -1, 0}},
    };
    auto id_of = [](const std::vector<int>& v) {
        std::string s = "v";
        for (int x : v) s += x < 0 ? "m" : std::to_string(x);
        return s;
    };
    std::map<std::string, CVector> vectors;
    std::vector<std::vector<std::string>> contexts;
    for (const auto& b : bases) {
        contexts.emplace_back();
        for (const auto& v : b) {
            vectors.emplace(id_of(v), CVector(v.begin(), v.end()));
            contexts.back().push_back(id_of(v));
        }
    }
    return VectorContextFamily(4, std::move(vectors), std::move(contexts));
}

}  // namespace qnsem
