#include "qnsem/lp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "qnsem/error.hpp"

namespace qnsem {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

// Arithmetic policy: exact for mpq_class, epsilon comparisons for double.
template <class T>
struct Arith;

template <>
struct Arith<mpq_class> {
    double eps = 0.0;
    bool zero(const mpq_class& x) const { return sgn(x) == 0; }
    bool neg(const mpq_class& x) const { return sgn(x) < 0; }
    bool pos(const mpq_class& x) const { return sgn(x) > 0; }
    static mpq_class from(double d) { return mpq_class(d); }
    static double to_double(const mpq_class& x) { return x.get_d(); }
    static std::string text(const mpq_class& x) { return x.get_str(); }
};

template <>
struct Arith<double> {
    double eps = 1e-9;
    bool zero(double x) const { return std::abs(x) <= eps; }
    bool neg(double x) const { return x < -eps; }
    bool pos(double x) const { return x > eps; }
    static double from(double d) { return d; }
    static double to_double(double x) { return x; }
    static std::string text(double x) { return fmt(x); }
};

template <class T>
using Sparse = std::map<std::size_t, T>;

template <class T>
class Solver {
public:
    Solver(const LinearProblem& p, double tol) : p_(p) {
        ar_.eps = std::is_same_v<T, double> ? tol : 0.0;
    }

    FeasibilityResult run() {
        dedup();
        result_.exact = std::is_same_v<T, mpq_class>;
        result_.distinct_rows = kept_.size();
        if (!eliminate()) return finish_infeasible();
        build_reduced();
        if (!trivially_infeasible_ && simplex()) return finish_feasible();
        return finish_infeasible();
    }

private:
    struct Row {
        Sparse<T> a;
        T b{};
        Sparse<T> combo;  // over kept equality indices
    };
    enum class Origin { Ineq, Upper, Lower };
    struct Reduced {
        std::vector<T> m;
        T d{};
        Origin origin;
        std::size_t index;  // constraint index or variable index
    };

    std::size_t n() const { return p_.names.size(); }

    void dedup() {
        std::set<std::string> seen;
        for (std::size_t i = 0; i < p_.constraints.size(); ++i) {
            const auto& c = p_.constraints[i];
            std::map<std::size_t, double> merged;
            for (const auto& [v, x] : c.terms) {
                if (v >= n()) throw Error("constraint '" + c.label + "' refers to an unknown variable");
                merged[v] += x;
            }
            std::ostringstream key;
            key.precision(17);
            key << (c.sense == LinearConstraint::Sense::Eq ? "=" : "<") << c.rhs;
            for (const auto& [v, x] : merged)
                if (x != 0.0) key << ";" << v << ":" << x;
            if (!seen.insert(key.str()).second) continue;
            kept_.push_back(i);
            Sparse<T> row;
            for (const auto& [v, x] : merged)
                if (x != 0.0) row[v] = Arith<T>::from(x);
            rows_.push_back(std::move(row));
            rhs_.push_back(Arith<T>::from(c.rhs));
        }
    }

    bool is_eq(std::size_t k) const { return p_.constraints[kept_[k]].sense == LinearConstraint::Sense::Eq; }

    void axpy(Sparse<T>& dst, const T& f, const Sparse<T>& src) {
        for (const auto& [c, v] : src) {
            T& x = dst[c];
            x -= f * v;
            if (ar_.zero(x)) dst.erase(c);
        }
    }

    void subtract(Row& dst, const T& f, const Row& src) {
        axpy(dst.a, f, src.a);
        dst.b -= f * src.b;
        axpy(dst.combo, f, src.combo);
    }

    // Reduced row echelon form of the equalities, one row at a time.
    bool eliminate() {
        for (std::size_t k = 0; k < kept_.size(); ++k) {
            if (!is_eq(k)) continue;
            Row r{rows_[k], rhs_[k], {{k, T(1)}}};
            std::vector<std::pair<std::size_t, T>> hits;
            for (const auto& [c, v] : r.a)
                if (pivots_.count(c)) hits.emplace_back(c, v);
            for (const auto& [c, v] : hits) subtract(r, v, pivots_.at(c));
            if (r.a.empty()) {
                if (ar_.zero(r.b)) continue;
                // 0 = b with b != 0: scale so the right-hand sides sum to -1
                const T s = T(-1) / r.b;
                for (const auto& [e, v] : r.combo) eq_mult_[e] = v * s;
                return false;
            }
            const std::size_t col = r.a.begin()->first;
            const T lead = r.a.begin()->second;
            for (auto& [c, v] : r.a) v /= lead;
            r.b /= lead;
            for (auto& [c, v] : r.combo) v /= lead;
            for (auto& [pc, prow] : pivots_) {
                auto it = prow.a.find(col);
                if (it != prow.a.end()) {
                    const T f = it->second;
                    subtract(prow, f, r);
                }
            }
            pivots_.emplace(col, std::move(r));
        }
        return true;
    }

    // Rewrites sum coef*x <= rhs in the free variables.
    Reduced substitute(const Sparse<T>& terms, T rhs, Origin o, std::size_t index) {
        Reduced red{std::vector<T>(free_.size(), T(0)), rhs, o, index};
        for (const auto& [v, coef] : terms) {
            auto pit = pivots_.find(v);
            if (pit == pivots_.end()) {
                red.m[free_pos_.at(v)] += coef;
                continue;
            }
            red.d -= coef * pit->second.b;
            for (const auto& [c, x] : pit->second.a)
                if (c != v) red.m[free_pos_.at(c)] -= coef * x;
        }
        return red;
    }

    void build_reduced() {
        for (std::size_t v = 0; v < n(); ++v) {
            if (pivots_.count(v)) continue;
            free_pos_[v] = free_.size();
            free_.push_back(v);
        }
        auto push = [&](Reduced r) {
            const bool empty = std::all_of(r.m.begin(), r.m.end(), [&](const T& x) { return ar_.zero(x); });
            if (!empty) {
                reduced_.push_back(std::move(r));
            } else if (ar_.neg(r.d)) {
                reduced_ = {std::move(r)};
                trivially_infeasible_ = true;
            }
        };
        for (std::size_t k = 0; k < kept_.size() && !trivially_infeasible_; ++k)
            if (!is_eq(k)) push(substitute(rows_[k], rhs_[k], Origin::Ineq, k));
        for (std::size_t v = 0; v < n() && !trivially_infeasible_; ++v) push(substitute({{v, T(1)}}, T(1), Origin::Upper, v));
        for (const auto& [v, row] : pivots_) {
            if (trivially_infeasible_) break;
            push(substitute({{v, T(-1)}}, T(0), Origin::Lower, v));
        }
        if (trivially_infeasible_) z_ = {T(1)};
    }

    // Phase 1 on y >= 0, M y <= d with an artificial per row.
    bool simplex() {
        const std::size_t R = reduced_.size();
        const std::size_t k = free_.size();
        const std::size_t cols = k + 2 * R;
        std::vector<std::vector<T>> tab(R, std::vector<T>(cols + 1, T(0)));
        std::vector<int> sigma(R, 1);
        std::vector<std::size_t> basis(R);
        for (std::size_t i = 0; i < R; ++i) {
            sigma[i] = ar_.neg(reduced_[i].d) ? -1 : 1;
            const T s(sigma[i]);
            for (std::size_t j = 0; j < k; ++j) tab[i][j] = s * reduced_[i].m[j];
            tab[i][k + i] = s;
            tab[i][k + R + i] = T(1);
            tab[i][cols] = s * reduced_[i].d;
            basis[i] = k + R + i;
        }
        std::vector<T> obj(cols + 1, T(0));
        for (std::size_t j = k + R; j < cols; ++j) obj[j] = T(1);
        for (std::size_t i = 0; i < R; ++i)
            for (std::size_t j = 0; j <= cols; ++j) obj[j] -= tab[i][j];

        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (ar_.neg(obj[j])) {
                    enter = j;
                    break;
                }
            if (enter == cols) break;
            std::size_t leave = R;
            T best{};
            for (std::size_t i = 0; i < R; ++i) {
                if (!ar_.pos(tab[i][enter])) continue;
                T ratio = tab[i][cols] / tab[i][enter];
                if (leave == R || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == R) break;  // unbounded direction cannot occur in phase 1
            const T piv = tab[leave][enter];
            for (auto& x : tab[leave]) x /= piv;
            for (std::size_t i = 0; i <= R; ++i) {
                auto& row = i == R ? obj : tab[i];
                if (i == leave || ar_.zero(row[enter])) continue;
                const T f = row[enter];
                for (std::size_t j = 0; j <= cols; ++j)
                    if (!ar_.zero(tab[leave][j])) row[j] -= f * tab[leave][j];
                row[enter] = T(0);
            }
            basis[leave] = enter;
        }
        const T w = -obj[cols];
        if (ar_.pos(w)) {
            z_.assign(R, T(0));
            for (std::size_t i = 0; i < R; ++i) {
                const T pi = T(1) - obj[k + R + i];
                T z = -T(sigma[i]) * pi;
                if (ar_.neg(z) || ar_.zero(z)) z = T(0);
                z_[i] = z;
            }
            return false;
        }
        y_.assign(k, T(0));
        for (std::size_t i = 0; i < R; ++i)
            if (basis[i] < k) y_[basis[i]] = tab[i][cols];
        return true;
    }

    std::vector<T> full_point() const {
        std::vector<T> x(n(), T(0));
        for (std::size_t f = 0; f < free_.size(); ++f) x[free_[f]] = y_.empty() ? T(0) : y_[f];
        for (const auto& [v, row] : pivots_) {
            T val = row.b;
            for (const auto& [c, a] : row.a)
                if (c != v) val -= a * x[c];
            x[v] = val;
        }
        return x;
    }

    FeasibilityResult finish_feasible() {
        const auto x = full_point();
        T worst(0);
        auto note = [&](const T& viol) {
            if (worst < viol) worst = viol;
        };
        for (std::size_t k = 0; k < kept_.size(); ++k) {
            T lhs(0);
            for (const auto& [v, a] : rows_[k]) lhs += a * x[v];
            T diff = lhs - rhs_[k];
            if (is_eq(k)) {
                note(diff);
                note(-diff);
            } else {
                note(diff);
            }
        }
        for (const auto& v : x) {
            note(-v);
            note(v - T(1));
        }
        result_.feasible = true;
        result_.residual = Arith<T>::to_double(worst);
        for (const auto& v : x) {
            result_.point.push_back(Arith<T>::to_double(v));
            if (result_.exact) result_.exact_point.push_back(Arith<T>::text(v));
        }
        return result_;
    }

    FeasibilityResult finish_infeasible() {
        // Multipliers on the original rows.
        std::map<std::size_t, T> ineq;  // kept index -> z
        std::map<std::size_t, T> upper, lower;
        Sparse<T> total;  // combination over variables before equalities
        T total_rhs(0);
        std::vector<T> w(free_.size(), T(0));
        for (std::size_t i = 0; i < z_.size(); ++i) {
            const T& z = z_[i];
            if (ar_.zero(z)) continue;
            const Reduced& r = reduced_[i];
            for (std::size_t f = 0; f < free_.size(); ++f) w[f] += z * r.m[f];
            switch (r.origin) {
                case Origin::Ineq:
                    ineq[r.index] += z;
                    for (const auto& [v, a] : rows_[r.index]) total[v] += z * a;
                    total_rhs += z * rhs_[r.index];
                    break;
                case Origin::Upper:
                    upper[r.index] += z;
                    total[r.index] += z;
                    total_rhs += z;
                    break;
                case Origin::Lower:
                    lower[r.index] += z;
                    total[r.index] -= z;
                    break;
            }
        }
        for (std::size_t f = 0; f < free_.size(); ++f) {
            if (ar_.zero(w[f])) continue;
            lower[free_[f]] += w[f];
            total[free_[f]] -= w[f];
        }
        for (const auto& [v, row] : pivots_) {
            auto it = total.find(v);
            if (it == total.end() || ar_.zero(it->second)) continue;
            const T c = it->second;
            for (const auto& [e, x] : row.combo) eq_mult_[e] -= c * x;
        }

        // Independent re-check of the certificate against the original rows.
        Sparse<T> acc;
        T acc_rhs(0);
        auto add_row = [&](std::size_t k, const T& m) {
            for (const auto& [v, a] : rows_[k]) acc[v] += m * a;
            acc_rhs += m * rhs_[k];
        };
        for (const auto& [e, m] : eq_mult_) add_row(e, m);
        for (const auto& [k, m] : ineq) add_row(k, m);
        for (const auto& [v, m] : upper) {
            acc[v] += m;
            acc_rhs += m;
        }
        for (const auto& [v, m] : lower) acc[v] -= m;
        bool ok = ar_.neg(acc_rhs);
        for (const auto& [v, a] : acc) {
            if (std::is_same_v<T, double> ? std::abs(Arith<T>::to_double(a)) > 1e3 * ar_.eps : !ar_.zero(a)) ok = false;
        }
        for (const auto& [k, m] : ineq) ok = ok && !ar_.neg(m);
        result_.certificate_verified = ok;

        auto emit = [&](const std::string& label, const T& m) {
            if (ar_.zero(m)) return;
            result_.certificate.push_back({label, Arith<T>::text(m), Arith<T>::to_double(m)});
        };
        auto label_of = [&](std::size_t k) {
            const auto& c = p_.constraints[kept_[k]];
            return c.label.empty() ? "row " + std::to_string(kept_[k]) : c.label;
        };
        for (const auto& [e, m] : eq_mult_) emit(label_of(e), m);
        for (const auto& [k, m] : ineq) emit(label_of(k), m);
        for (const auto& [v, m] : upper) emit(p_.names[v] + " <= 1", m);
        for (const auto& [v, m] : lower) emit(p_.names[v] + " >= 0", m);
        result_.feasible = false;
        return result_;
    }

    const LinearProblem& p_;
    Arith<T> ar_;
    std::vector<std::size_t> kept_;
    std::vector<Sparse<T>> rows_;
    std::vector<T> rhs_;
    std::map<std::size_t, Row> pivots_;
    std::map<std::size_t, T> eq_mult_;
    std::vector<std::size_t> free_;
    std::map<std::size_t, std::size_t> free_pos_;
    std::vector<Reduced> reduced_;
    bool trivially_infeasible_ = false;
    std::vector<T> z_;
    std::vector<T> y_;
    FeasibilityResult result_;
};

}  // namespace

std::size_t LinearProblem::add_variable(std::string name) {
    names.push_back(std::move(name));
    return names.size() - 1;
}

FeasibilityResult solve_feasibility(const LinearProblem& problem, bool exact, double tol) {
    if (exact) return Solver<mpq_class>(problem, tol).run();
    return Solver<double>(problem, tol).run();
}

double max_violation(const LinearProblem& problem, const std::vector<double>& x) {
    if (x.size() != problem.names.size()) throw Error("point has the wrong number of coordinates");
    double worst = 0.0;
    for (const auto& c : problem.constraints) {
        double lhs = 0.0;
        for (const auto& [v, a] : c.terms) lhs += a * x[v];
        const double d = lhs - c.rhs;
        worst = std::max(worst, c.sense == LinearConstraint::Sense::Eq ? std::abs(d) : d);
    }
    for (double v : x) worst = std::max({worst, -v, v - 1.0});
    return worst;
}

}  // namespace qnsem
