#pragma once

#include <string>
#include <vector>

namespace qnsem {

/// Tolerance used at interval endpoints when testing membership.
inline constexpr double kMembershipTol = 1e-9;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Non-empty finite union of closed intervals (points are degenerate
/// intervals) inside [0,1]. Always normalized: sorted, disjoint, merged.
class IntervalUnion {
public:
    static IntervalUnion point(double x);
    static IntervalUnion closed(double lo, double hi);
    static IntervalUnion from_segments(std::vector<Interval> segments);

    const std::vector<Interval>& segments() const { return segments_; }
    double lower() const { return segments_.front().lo; }
    double upper() const { return segments_.back().hi; }
    bool is_point() const { return segments_.size() == 1 && segments_[0].lo == segments_[0].hi; }

    bool contains(double x, double tol = kMembershipTol) const;
    bool subset_of(const IntervalUnion& other, double tol = kMembershipTol) const;
    IntervalUnion unite(const IntervalUnion& other) const;

    std::string to_string() const;

private:
    explicit IntervalUnion(std::vector<Interval> s) : segments_(std::move(s)) {}
    std::vector<Interval> segments_;
};

/// Interval with independently open or closed endpoints; may be empty.
/// Used to describe input regions (designated values, threshold-map cells)
/// and the exact image of a table rule over such a region.
struct Region {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;

    static Region closed(double lo, double hi) { return {lo, hi, false, false}; }
    static Region point(double x) { return {x, x, false, false}; }
    static Region empty_region() { return {1.0, 0.0, false, false}; }

    bool empty() const;
    bool contains(double x) const;
    Region intersect(const Region& other) const;
    /// Representative point: midpoint, or the attained endpoint.
    double sample() const;
    std::string to_string() const;
};

using RegionUnion = std::vector<Region>;

bool intersects(const RegionUnion& u, const Region& r);
bool region_subset(const RegionUnion& u, const Region& r);
std::string to_string(const RegionUnion& u);

}  // namespace qnsem
