#include <doctest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <thread>

using namespace tabtag;

TEST_CASE("text loader normalizes axis vectors") {
    const auto m = fixtures::axis_model();
    CHECK(m.dimension() == 3);
    CHECK(m.size() == 2);
    CHECK(m.lookup("a")->components == std::vector<double>{1, 0, 0});
    CHECK(m.lookup("b")->components == std::vector<double>{0, 1, 0});
    CHECK_FALSE(m.lookup("zzz"));
}

TEST_CASE("text loader rejects a short line") {
    CHECK_THROWS_WITH_AS(fixtures::load_text("1 3\na 1 0\n"), doctest::Contains("dimension mismatch"), Error);
}

TEST_CASE("malformed headers") {
    for (const char* text : {"", "abc\n", "3\n", "2 0\n", "2 3 4\n", "-1 3\n"}) {
        CAPTURE(text);
        CHECK_THROWS_WITH_AS(fixtures::load_text(text), doctest::Contains("malformed header"), Error);
        CHECK_THROWS_WITH_AS(fixtures::load_binary(text), doctest::Contains("malformed header"), Error);
    }
}

TEST_CASE("truncated records") {
    const auto raw = fixtures::make_model(5, 4, 3);
    const auto bin = fixtures::to_binary(raw);
    // Cut inside the last record's floats, and inside a token.
    CHECK_THROWS_WITH_AS(fixtures::load_binary(bin.substr(0, bin.size() - 7)), doctest::Contains("truncated"), Error);
    CHECK_THROWS_WITH_AS(fixtures::load_binary(bin.substr(0, bin.find("tok4") + 2)), doctest::Contains("truncated"),
                         Error);
    const auto text = fixtures::to_text(raw);
    CHECK_THROWS_WITH_AS(fixtures::load_text(text.substr(0, text.find("tok4"))), doctest::Contains("truncated"),
                         Error);
    CHECK_THROWS_AS(fixtures::load_text("1 2\na 1 0\nb 0 1\n"), Error);
}

TEST_CASE("binary and text loaders agree on generated fixtures") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto raw = fixtures::make_model(50, 12, seed);
        const auto from_text = fixtures::load_text(fixtures::to_text(raw));
        const auto from_bin = fixtures::load_binary(fixtures::to_binary(raw));
        REQUIRE(from_text.size() == 50);
        REQUIRE(from_bin.size() == 50);
        for (const auto& t : raw.tokens) {
            const auto a = *from_text.lookup(t);
            const auto b = *from_bin.lookup(t);
            for (std::size_t j = 0; j < a.dimension(); ++j) CHECK(std::abs(a.components[j] - b.components[j]) <= 1e-6);
        }
    }
}

TEST_CASE("binary records without trailing newline") {
    auto raw = fixtures::make_model(3, 2, 9);
    std::string bin = std::to_string(3) + " 2\n";
    for (std::size_t i = 0; i < 3; ++i) {
        bin += raw.tokens[i] + " ";
        bin.append(reinterpret_cast<const char*>(raw.vectors[i].data()), 8);
    }
    const auto m = fixtures::load_binary(bin);
    CHECK(m.size() == 3);
    CHECK(m.contains("tok2"));
}

TEST_CASE("stored vectors have unit norm") {
    const auto m = fixtures::load_text(fixtures::to_text(fixtures::make_model(40, 25, 5)));
    for (const auto& t : m.tokens()) {
        const auto raw = *m.raw(t);
        double sq = 0;
        for (float x : raw) sq += double(x) * double(x);
        CHECK(std::abs(std::sqrt(sq) - 1.0) <= 1e-6);
        const auto e = *m.lookup(t);
        CHECK(std::abs(similarity(e, e) - 1.0) <= 1e-9);
    }
}

TEST_CASE("duplicates keep the first vector; zero vectors are rejected") {
    const auto m = fixtures::load_text("4 2\nx 1 0\nx 0 1\nz 0 0\ny 0 3\n");
    CHECK(m.size() == 2);
    CHECK(m.lookup("x")->components == std::vector<double>{1, 0});
    CHECK_FALSE(m.lookup("z"));
    CHECK(m.report().duplicate_tokens == 1);
    CHECK(m.report().zero_norm_tokens == 1);
}

TEST_CASE("lookup falls back to lowercase") {
    const auto m = fixtures::load_text("2 2\nParis 1 0\nriver 0 1\n");
    CHECK(m.lookup("Paris"));
    CHECK_FALSE(m.lookup("paris"));
    CHECK(m.lookup("River")->components == std::vector<double>{0, 1});
}

TEST_CASE("embed_phrase") {
    const auto m = fixtures::axis_model();
    CHECK(embed_phrase(m, std::vector<std::string>{"a"})->components == std::vector<double>{1, 0, 0});
    const auto ab = *embed_phrase(m, std::vector<std::string>{"a", "b"});
    CHECK(ab.components[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ab.components[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ab.components[2] == 0.0);
    CHECK(embed_phrase(m, std::vector<std::string>{"a", "nope"})->components == std::vector<double>{1, 0, 0});
    CHECK_FALSE(embed_phrase(m, std::vector<std::string>{"nope"}));
    CHECK_THROWS_AS(embed_phrase(m, std::vector<std::string>{}), Error);

    const auto opposite = fixtures::load_text("2 2\nup 0 1\ndown 0 -1\n");
    CHECK_FALSE(embed_phrase(opposite, std::vector<std::string>{"up", "down"}));
}

TEST_CASE("embed_phrase matches the mean-and-normalize oracle") {
    const auto raw = fixtures::make_model(60, 10, 11);
    const auto m = fixtures::load_text(fixtures::to_text(raw));
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, raw.tokens.size() - 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> toks;
        for (int i = 0; i < 5; ++i) toks.push_back(raw.tokens[pick(rng)]);
        // Plain mean in token order, independent of the sorted summation.
        std::vector<double> mean(10, 0.0);
        for (const auto& t : toks)
            for (std::size_t j = 0; j < 10; ++j) mean[j] += m.lookup(t)->components[j] / 5.0;
        const auto expected = *oracle::unit(mean);
        const auto got = *embed_phrase(m, toks);
        for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(got.components[j] - expected[j]) <= 1e-9);

        auto shuffled = toks;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(embed_phrase(m, shuffled)->components == got.components);
    }
}

TEST_CASE("similarity") {
    const Embedding x{{1, 0, 0}}, y{{0, 1, 0}};
    CHECK(similarity(x, x) == 1.0);
    CHECK(similarity(x, y) == 0.0);
    CHECK_THROWS_AS(similarity(x, Embedding{{1, 0}}), Error);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(7), b(7);
        for (auto& v : a) v = n(rng);
        for (auto& v : b) v = n(rng);
        a = *oracle::unit(a);
        b = *oracle::unit(b);
        const Embedding u{a}, v{b};
        CHECK(std::abs(similarity(u, v) - oracle::dot(a, b)) <= 1e-12);
        CHECK(std::abs(similarity(u, v) - similarity(v, u)) <= 1e-12);
        CHECK(std::abs(similarity(u, u) - 1.0) <= 1e-9);
    }
}

TEST_CASE("load_model reports missing files") {
    CHECK_THROWS_WITH_AS(load_model("/nonexistent/model.bin", ModelFormat::binary), doctest::Contains("model"), Error);
}

TEST_CASE("model is shareable across reader threads") {
    const auto m = fixtures::load_text(fixtures::to_text(fixtures::make_model(30, 8, 2)));
    std::vector<double> sums(4, 0.0);
    {
        std::vector<std::jthread> readers;
        for (int t = 0; t < 4; ++t)
            readers.emplace_back([&, t] {
                for (int rep = 0; rep < 100; ++rep)
                    for (const auto& tok : m.tokens()) sums[t] += m.lookup(tok)->components[0];
            });
    }
    CHECK(sums[0] == sums[1]);
    CHECK(sums[2] == sums[3]);
}
