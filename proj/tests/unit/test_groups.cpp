#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "hyperwave/error.hpp"
#include "hyperwave/groups.hpp"

using namespace hyperwave;

namespace {

bool freely_reduced(const std::vector<std::uint8_t>& w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
        if ((w[i] ^ 1) == w[i - 1]) return false;
    }
    return true;
}

// every reduced word up to length L, no pruning, filtered by distance
std::size_t brute_force_count(const GroupPresentation& g, const HPoint& x, const HPoint& y, double R, int L) {
    struct Item {
        std::vector<std::uint8_t> w;
        Eigen::MatrixXd m;
    };
    std::vector<Item> level{{{}, Eigen::MatrixXd::Identity(g.n + 1, g.n + 1)}};
    std::size_t count = dist(x, y) <= R ? 1 : 0;
    for (int k = 1; k <= L; ++k) {
        std::vector<Item> next;
        for (const auto& it : level) {
            for (int l = 0; l < static_cast<int>(g.letter_count()); ++l) {
                if (!it.w.empty() && (it.w.back() ^ 1) == l) continue;
                Item c{it.w, it.m * g.letter(l).matrix()};
                c.w.push_back(static_cast<std::uint8_t>(l));
                Eigen::VectorXd p = c.m * y.coords();
                const double d = std::acosh(std::max(1.0, -minkowski(x.coords(), p)));
                if (d <= R) ++count;
                next.push_back(std::move(c));
            }
        }
        level = std::move(next);
    }
    return count;
}

}  // namespace

TEST_CASE("presentations and labels") {
    const auto g = schottky_preset();
    CHECK(g.letter_count() == 4);
    CHECK(g.letter_label(0) == "a");
    CHECK(g.letter_label(3) == "B");
    const std::vector<std::uint8_t> w{0, 2, 3};
    CHECK(g.word_label(w) == "abB");
    CHECK(g.word_label({}) == "e");
    // b is a boost along the second axis
    CHECK(std::abs(translation_length(g.generators[1]) - 6.0) < 1e-9);
    CHECK(std::abs(g.generators[1].matrix()(0, 2) - std::sinh(6.0)) < 1e-6 * std::sinh(6.0));
}

TEST_CASE("invalid groups are rejected") {
    CHECK_THROWS_AS(cyclic_group(3, 0.0), DomainError);
    GeneratorSpec a;
    a.rapidity = 1.5;
    GeneratorSpec b = a;
    b.conjugator.push_back({GeneratorSpec::Step::Kind::rotate, 1, 2, 1.5707963267948966});
    // generators of rapidity 1.5 are far too short for ping-pong
    CHECK_THROWS_AS(make_group(GroupKind::schottky, 3, {a, b}), DomainError);
    // both generators along one axis: half-spaces overlap
    GeneratorSpec c;
    c.rapidity = 6.0;
    CHECK_THROWS_AS(make_group(GroupKind::schottky, 3, {c, c}), DomainError);
}

TEST_CASE("ping-pong certificate of the preset") {
    const auto g = schottky_preset();
    const auto cert = ping_pong_certificate(g);
    CHECK(cert.disjoint);
    CHECK(cert.max_pairing < -1.0);
    CHECK(cert.samples == 4000);
    CHECK(cert.margin > 0.05);
    CHECK(cert.valid);
    MESSAGE("ping-pong margin " << cert.margin);
}

TEST_CASE("json round trip of a group document") {
    const auto doc = nlohmann::json::parse(R"({
        "kind": "schottky", "n": 3,
        "generators": [
            {"rapidity": 6, "axis": 1},
            {"rapidity": 6, "axis": 1, "conjugator": [{"rotate": [1, 2, 1.5707963267948966]}]}
        ]})");
    const auto g = group_from_json(doc);
    const auto p = schottky_preset();
    for (int i = 0; i < 2; ++i) CHECK((g.generators[i].matrix() - p.generators[i].matrix()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(group_from_json(nlohmann::json::parse(R"({"kind": "trivial", "n": 4})")).generators.empty());
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"kind": "lattice", "n": 3})")), DomainError);
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"n": 3})")), DomainError);
    CHECK_THROWS_AS(group_from_json(nlohmann::json::parse(R"({"kind": "cyclic", "n": 3, "generators": [{"rapidity": 1, "conjugator": [{"shear": 1}]}]})")),
                    DomainError);
}

TEST_CASE("cyclic orbit of a unit boost") {
    const auto g = cyclic_group(3, 1.0);
    const HPoint o = origin(3);
    const auto orbit = enumerate_orbit(g, o, o, 3.5);
    REQUIRE(orbit.size() == 7);
    std::multiset<long> ks;
    for (const auto& s : orbit) {
        const double k = std::round(s.distance);
        CHECK(std::abs(s.distance - k) < 1e-12);
        ks.insert(static_cast<long>(k));
        CHECK(s.word.size() == static_cast<std::size_t>(k));
    }
    CHECK(ks == std::multiset<long>{0, 1, 1, 2, 2, 3, 3});
    CHECK(enumerate_orbit(g, o, o, 0.5).size() == 1);
}

TEST_CASE("pruned enumeration matches the exhaustive search") {
    const HPoint o = origin(3);
    std::mt19937_64 rng(11);
    const HPoint x = random_point(3, 0.7, rng);
    const HPoint y = random_point(3, 1.3, rng);
    for (const auto& g : {schottky_preset(), cyclic_group(3, 1.0)}) {
        for (double R : {8.0, 20.0, 30.0}) {
            EnumerationOptions opts;
            opts.max_word_length = 8;
            const auto pruned = enumerate_orbit(g, x, y, R, opts);
            opts.prune = false;
            const auto full = enumerate_orbit(g, x, y, R, opts);
            CHECK(pruned.size() == full.size());
            CHECK(pruned.size() == brute_force_count(g, x, y, R, 8));
            for (const auto& s : pruned) CHECK(freely_reduced(s.word));
        }
    }
    // automatic word length finds everything the fixed one does
    const auto g = schottky_preset();
    EnumerationOptions fixed;
    fixed.max_word_length = 8;
    CHECK(enumerate_orbit(g, o, o, 30.0).size() == enumerate_orbit(g, o, o, 30.0, fixed).size());
}

TEST_CASE("enumeration respects isometry invariance and the cap") {
    const auto g = schottky_preset();
    std::mt19937_64 rng(5);
    const HPoint x = random_point(3, 1.0, rng);
    const HPoint y = random_point(3, 0.5, rng);
    const auto base = enumerate_orbit(g, x, y, 25.0);
    const Isometry id = Isometry::identity(3);
    const auto moved = enumerate_orbit(g, apply(id, x), apply(id, y), 25.0);
    REQUIRE(base.size() == moved.size());
    for (std::size_t i = 0; i < base.size(); ++i) CHECK(std::abs(base[i].distance - moved[i].distance) < 1e-9);

    EnumerationOptions small;
    small.sample_cap = 10;
    CHECK_THROWS_AS(enumerate_orbit(g, x, y, 40.0, small), DomainError);
    CHECK_THROWS_AS(enumerate_orbit(g, x, y, -1.0), DomainError);
}

TEST_CASE("cyclic Poincare series against the geometric closed form") {
    const HPoint o = origin(3);
    for (double ell : {0.5, 1.0, 2.0}) {
        const auto g = cyclic_group(3, ell);
        for (double s : {0.5, 1.0, 2.0}) {
            const auto p = poincare_partial(g, s, o, o, 80.0);
            const double q = std::exp(-s * ell);
            const double exact = 1.0 + 2.0 * q / (1.0 - q);
            CHECK(std::abs(p.partial + p.tail - exact) < 1e-10);
            CHECK(p.tail >= 0.0);
        }
    }
    const auto p = poincare_partial(cyclic_group(3, 1.0), 1.0, o, o, 60.0);
    CHECK(std::abs(p.partial - 2.163953413738653) < 1e-9);
}

TEST_CASE("Poincare series basics") {
    const HPoint o = origin(3);
    const auto t = poincare_partial(trivial_group(3), 0.7, o, o, 10.0);
    CHECK(t.partial == 1.0);
    CHECK(t.tail == 0.0);
    CHECK_THROWS_AS(poincare_partial(trivial_group(3), 0.0, o, o, 10.0), DomainError);

    const auto g = schottky_preset();
    double prev = 0.0;
    for (double R : {6.0, 12.0, 18.0, 24.0}) {
        const double v = poincare_partial(g, 0.8, o, o, R).partial;
        CHECK(v >= prev);
        prev = v;
    }
    double last = INFINITY;
    for (double s : {0.3, 0.5, 0.8, 1.2}) {
        const double v = poincare_partial(g, s, o, o, 20.0).partial;
        CHECK(v < last);
        last = v;
    }
    // s below the growth rate has no finite tail
    const std::vector<double> d{0.0, 1.0, 2.0};
    GrowthModel m;
    m.empty = false;
    m.delta = 0.5;
    m.amplitude = 1.0;
    CHECK(std::isinf(poincare_from_distances(d, 0.4, 3.0, m).tail));
}

TEST_CASE("critical exponent estimates") {
    const auto cyc = estimate_delta(cyclic_group(3, 1.0), 120.0);
    CHECK(cyc.samples >= 200);
    CHECK(cyc.counting <= 0.05);
    CHECK(cyc.abscissa <= 0.05);

    const auto sch = estimate_delta(schottky_preset(), 40.0);
    MESSAGE("Schottky delta: counting " << sch.counting << ", abscissa " << sch.abscissa << ", r2 " << sch.r2
                                        << ", samples " << sch.samples);
    CHECK(sch.counting < 1.0 - 0.1);
    CHECK(sch.abscissa < 1.0 - 0.1);
    CHECK(std::abs(sch.counting - sch.abscissa) < 0.1);
    CHECK_FALSE(sch.degenerate);

    CHECK_THROWS_AS(estimate_delta(cyclic_group(3, 1.0), 20.0), DomainError);
}

TEST_CASE("uniform Poincare ratios") {
    const auto g = schottky_preset();
    const HPoint o = origin(3);
    const double dh = estimate_delta(g, 40.0).counting;
    const double s = dh + 0.5 * (1.0 - dh);

    const std::vector<std::pair<HPoint, HPoint>> same{{o, o}};
    CHECK(std::abs(check_uniform_poincare(g, s, same, 20.0, dh).max_ratio - 1.0) < 1e-15);

    const std::vector<std::pair<HPoint, HPoint>> shifted{{apply(g.generators[0], o), o},
                                                         {apply(g.generators[1], o), o}};
    const auto rep = check_uniform_poincare(g, s, shifted, 24.0, dh);
    for (double r : rep.ratios) CHECK((r >= 0.9 && r <= 1.1));

    std::mt19937_64 rng(3);
    std::vector<std::pair<HPoint, HPoint>> pairs;
    std::uniform_real_distribution<double> rad(0.0, 2.0);
    for (int i = 0; i < 50; ++i) pairs.emplace_back(random_point(3, rad(rng), rng), random_point(3, rad(rng), rng));
    const auto many = check_uniform_poincare(g, s, pairs, 16.0, dh);
    CHECK(std::isfinite(many.max_ratio));
    CHECK(many.max_ratio <= std::exp(2.0 * s * many.diameter_proxy));
    CHECK_THROWS_AS(check_uniform_poincare(g, dh, pairs, 16.0, dh), DomainError);
}
