#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tasac/errors.hpp"
#include "tasac/replay_buffer.hpp"

using namespace tasac;

namespace {

Transition make_tr(double tag) {
    return Transition{{tag, 0.5}, {0.1}, -tag, {tag + 1.0, 0.6}, false};
}

}  // namespace

TEST_CASE("replay push: size grows until capacity then overwrites oldest") {
    ReplayBuffer buf(2);
    buf.push(make_tr(1));
    CHECK(buf.size() == 1);
    buf.push(make_tr(2));
    CHECK(buf.size() == 2);
    buf.push(make_tr(3));
    CHECK(buf.size() == 2);

    // contents are exactly items 2 and 3
    std::vector<double> tags;
    for (std::size_t i = 0; i < buf.size(); ++i) tags.push_back(buf.at(i).obs[0]);
    std::sort(tags.begin(), tags.end());
    CHECK(tags == std::vector<double>{2.0, 3.0});
}

TEST_CASE("replay push: exactly capacity items fill the buffer") {
    ReplayBuffer buf(16);
    for (int i = 0; i < 16; ++i) buf.push(make_tr(i));
    CHECK(buf.size() == 16);
}

TEST_CASE("replay ring: after k > capacity pushes the last capacity items remain in order") {
    ReplayBuffer buf(5);
    for (int i = 0; i < 23; ++i) buf.push(make_tr(i));
    REQUIRE(buf.size() == 5);
    std::vector<double> tags;
    for (std::size_t i = 0; i < 5; ++i) tags.push_back(buf.at(i).obs[0]);
    std::sort(tags.begin(), tags.end());
    CHECK(tags == std::vector<double>{18.0, 19.0, 20.0, 21.0, 22.0});
}

TEST_CASE("replay push: non-finite transitions are rejected") {
    ReplayBuffer buf(4);
    Transition bad = make_tr(1);
    bad.reward = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(buf.push(bad), std::invalid_argument);
    bad = make_tr(1);
    bad.next_obs[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(buf.push(bad), std::invalid_argument);
    CHECK(buf.size() == 0);
}

TEST_CASE("replay push: actions outside the unit interval are rejected, bounds allowed") {
    ReplayBuffer buf(4);
    Transition bad = make_tr(1);
    bad.action = {1.5};
    CHECK_THROWS_AS(buf.push(bad), std::invalid_argument);
    Transition saturated = make_tr(1);
    saturated.action = {1.0};  // tanh saturates to exactly 1.0 in doubles
    buf.push(saturated);
    CHECK(buf.size() == 1);
}

TEST_CASE("replay sample: not ready until one batch is stored") {
    ReplayBuffer buf(100);
    Rng rng(1);
    buf.push(make_tr(1));
    CHECK_FALSE(buf.sample(2, rng).has_value());
    buf.push(make_tr(2));
    CHECK(buf.sample(2, rng).has_value());
}

TEST_CASE("replay sample: a single stored item is the only thing returned") {
    ReplayBuffer buf(8);
    buf.push(make_tr(7));
    Rng rng(2);
    const auto batch = buf.sample(1, rng);
    REQUIRE(batch.has_value());
    CHECK((*batch)[0].obs[0] == 7.0);
}

TEST_CASE("replay sample: uniform within 1% over 1e5 draws from 10 items") {
    ReplayBuffer buf(10);
    for (int i = 0; i < 10; ++i) buf.push(make_tr(i));
    Rng rng(3);
    std::array<int, 10> counts{};
    const int n = 100000;
    for (int call = 0; call < n / 10; ++call) {
        const auto batch = buf.sample(10, rng);
        REQUIRE(batch.has_value());
        for (const auto& tr : *batch) counts[static_cast<int>(tr.obs[0])]++;
    }
    for (int c : counts) CHECK(std::abs(c / double(n) - 0.10) < 0.01);
}

TEST_CASE("replay sample: deterministic under a fixed seed") {
    ReplayBuffer buf(10);
    for (int i = 0; i < 10; ++i) buf.push(make_tr(i));
    auto draw = [&buf] {
        Rng rng(44);
        std::vector<double> tags;
        const auto batch = buf.sample(32, rng);
        for (const auto& tr : *batch) tags.push_back(tr.obs[0]);
        return tags;
    };
    CHECK(draw() == draw());
}

TEST_CASE("replay snapshot: binary round trip preserves contents and ring position") {
    ReplayBuffer buf(4);
    for (int i = 0; i < 6; ++i) buf.push(make_tr(i));
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    buf.save(ss);
    ReplayBuffer back = ReplayBuffer::load(ss);
    REQUIRE(back.size() == buf.size());
    REQUIRE(back.capacity() == buf.capacity());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        CHECK(back.at(i).obs == buf.at(i).obs);
        CHECK(back.at(i).reward == buf.at(i).reward);
    }
    // pushing after reload overwrites the same slot as the original would
    ReplayBuffer clone(4);
    for (int i = 0; i < 6; ++i) clone.push(make_tr(i));
    clone.push(make_tr(100));
    back.push(make_tr(100));
    for (std::size_t i = 0; i < 4; ++i) CHECK(back.at(i).obs == clone.at(i).obs);
}

TEST_CASE("replay snapshot: corrupted header is rejected") {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    ss << "garbage";
    CHECK_THROWS_AS(ReplayBuffer::load(ss), config_error);
}
