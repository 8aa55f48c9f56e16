#include <doctest.h>

#include <cmath>
#include <set>

#include "raretail/rng.hpp"

using namespace raretail;

TEST_CASE("same (seed, id) reproduces the identical sequence") {
    RngStream a(42, stream_id(7, 3));
    RngStream b(42, stream_id(7, 3));
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream ids do not collide") {
    std::set<std::uint64_t> firsts;
    for (std::uint32_t r = 0; r < 1000; ++r) {
        RngStream s(42, stream_id(7, r));
        firsts.insert(s.next_u64());
    }
    CHECK(firsts.size() == 1000);
}

TEST_CASE("output i is a pure function of the counter") {
    RngStream a(1, 2);
    for (int i = 0; i < 10; ++i) a.next_u64();
    RngStream b(1, 2);
    b.ctr = 10;  // jump straight to draw 11
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("u01 stays inside the open unit interval and looks uniform") {
    RngStream s(7, 1);
    const long n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double u = s.next_u01();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("compose_id separates level/slot/step coordinates") {
    std::set<std::uint64_t> ids;
    for (std::uint64_t a = 0; a < 12; ++a)
        for (std::uint64_t b = 0; b < 12; ++b)
            for (std::uint64_t c = 0; c < 12; ++c) ids.insert(compose_id(a, b, c));
    CHECK(ids.size() == 12 * 12 * 12);
}
