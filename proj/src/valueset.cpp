#include "qnsem/valueset.hpp"

#include <algorithm>
#include <cmath>
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

}  // namespace

IntervalUnion IntervalUnion::point(double x) { return closed(x, x); }

IntervalUnion IntervalUnion::closed(double lo, double hi) { return from_segments({{lo, hi}}); }

IntervalUnion IntervalUnion::from_segments(std::vector<Interval> segments) {
    if (segments.empty()) throw Error("value set must be non-empty");
    for (const auto& s : segments) {
        if (!(s.lo <= s.hi) || s.lo < 0.0 || s.hi > 1.0) {
            throw Error("interval [" + fmt(s.lo) + ", " + fmt(s.hi) + "] is not a subinterval of [0,1]");
        }
    }
    std::sort(segments.begin(), segments.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& s : segments) {
        if (!merged.empty() && s.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, s.hi);
        } else {
            merged.push_back(s);
        }
    }
    return IntervalUnion(std::move(merged));
}

bool IntervalUnion::contains(double x, double tol) const {
    return std::any_of(segments_.begin(), segments_.end(),
                       [&](const Interval& s) { return x >= s.lo - tol && x <= s.hi + tol; });
}

bool IntervalUnion::subset_of(const IntervalUnion& other, double tol) const {
    return std::all_of(segments_.begin(), segments_.end(), [&](const Interval& s) {
        return std::any_of(other.segments_.begin(), other.segments_.end(), [&](const Interval& o) {
            return s.lo >= o.lo - tol && s.hi <= o.hi + tol;
        });
    });
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
    auto all = segments_;
    all.insert(all.end(), other.segments_.begin(), other.segments_.end());
    return from_segments(std::move(all));
}

std::string IntervalUnion::to_string() const {
    std::string out;
    for (const auto& s : segments_) {
        if (!out.empty()) out += " u ";
        out += s.lo == s.hi ? "{" + fmt(s.lo) + "}" : "[" + fmt(s.lo) + ", " + fmt(s.hi) + "]";
    }
    return out;
}

bool Region::empty() const {
    if (lo > hi) return true;
    return lo == hi && (lo_open || hi_open);
}

bool Region::contains(double x) const {
    if (empty()) return false;
    const bool above = lo_open ? x > lo : x >= lo;
    const bool below = hi_open ? x < hi : x <= hi;
    return above && below;
}

Region Region::intersect(const Region& o) const {
    Region r;
    if (lo > o.lo) {
        r.lo = lo;
        r.lo_open = lo_open;
    } else if (o.lo > lo) {
        r.lo = o.lo;
        r.lo_open = o.lo_open;
    } else {
        r.lo = lo;
        r.lo_open = lo_open || o.lo_open;
    }
    if (hi < o.hi) {
        r.hi = hi;
        r.hi_open = hi_open;
    } else if (o.hi < hi) {
        r.hi = o.hi;
        r.hi_open = o.hi_open;
    } else {
        r.hi = hi;
        r.hi_open = hi_open || o.hi_open;
    }
    return r;
}

double Region::sample() const {
    if (empty()) throw Error("sample of an empty region");
    if (!lo_open) return lo;
    if (!hi_open) return hi;
    return 0.5 * (lo + hi);
}

std::string Region::to_string() const {
    if (empty()) return "{}";
    if (lo == hi) return "{" + fmt(lo) + "}";
    return std::string(lo_open ? "(" : "[") + fmt(lo) + ", " + fmt(hi) + (hi_open ? ")" : "]");
}

bool intersects(const RegionUnion& u, const Region& r) {
    return std::any_of(u.begin(), u.end(), [&](const Region& s) { return !s.intersect(r).empty(); });
}

bool region_subset(const RegionUnion& u, const Region& r) {
    return std::all_of(u.begin(), u.end(), [&](const Region& s) {
        if (s.empty()) return true;
        const Region i = s.intersect(r);
        return !i.empty() && i.lo == s.lo && i.hi == s.hi && i.lo_open == s.lo_open && i.hi_open == s.hi_open;
    });
}

std::string to_string(const RegionUnion& u) {
    std::string out;
    for (const auto& r : u) {
        if (r.empty()) continue;
        if (!out.empty()) out += " u ";
        out += r.to_string();
    }
    return out.empty() ? "{}" : out;
}

}  // namespace qnsem
