#include <doctest.h>

#include "qnsem/error.hpp"
#include "qnsem/valueset.hpp"

using namespace qnsem;

TEST_SUITE("valueset") {

TEST_CASE("segments are merged and sorted") {
    const auto u = IntervalUnion::from_segments({{0.5, 0.7}, {0.1, 0.2}, {0.6, 0.9}});
    REQUIRE(u.segments().size() == 2);
    CHECK(u.lower() == 0.1);
    CHECK(u.upper() == 0.9);
    CHECK(u.to_string() == "[0.1, 0.2] u [0.5, 0.9]");
    CHECK(IntervalUnion::point(0.3).is_point());
    CHECK(IntervalUnion::point(0.3).to_string() == "{0.3}");
}

TEST_CASE("values stay inside [0,1]") {
    CHECK_THROWS_AS(IntervalUnion::closed(0.5, 0.2), Error);
    CHECK_THROWS_AS(IntervalUnion::closed(-0.5, 0.2), Error);
    CHECK_THROWS_AS(IntervalUnion::point(1.5), Error);
    CHECK_THROWS_AS(IntervalUnion::from_segments({}), Error);
}

TEST_CASE("membership and inclusion honour the tolerance") {
    const auto u = IntervalUnion::closed(0.2, 0.4);
    CHECK(u.contains(0.2));
    CHECK(u.contains(0.4 + 1e-10));
    CHECK_FALSE(u.contains(0.41));
    CHECK(IntervalUnion::point(0.3).subset_of(u));
    CHECK_FALSE(IntervalUnion::closed(0.1, 0.3).subset_of(u));
    CHECK(u.unite(IntervalUnion::point(0.9)).segments().size() == 2);
}

TEST_CASE("regions with open ends") {
    const Region open{0.0, 1.0, true, true};
    CHECK_FALSE(open.contains(0.0));
    CHECK(open.contains(0.5));
    CHECK(open.sample() == 0.5);
    CHECK(Region::point(1.0).sample() == 1.0);
    CHECK(Region::empty_region().empty());
    CHECK(Region{0.5, 0.5, true, false}.empty());
    CHECK(open.intersect(Region::closed(0.5, 2.0)).to_string() == "[0.5, 1)");
    CHECK(region_subset({Region::closed(0.2, 0.3)}, Region::closed(0.0, 0.5)));
    CHECK_FALSE(region_subset({Region{0.0, 0.5, false, true}}, Region{0.0, 0.5, true, true}));
    CHECK(intersects({Region::closed(0.2, 0.3)}, Region::closed(0.3, 0.5)));
    CHECK_FALSE(intersects({Region{0.2, 0.3, false, true}}, Region::closed(0.3, 0.5)));
}

}
