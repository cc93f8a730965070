#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hyperwave/geometry.hpp"

namespace hyperwave {

enum class GroupKind { trivial, cyclic, schottky };

std::string to_string(GroupKind kind);

/// Free group on hyperbolic generators. Letter 2i is generator i, letter
/// 2i+1 its inverse. For Schottky groups every letter carries the unit
/// spacelike normal of its ping-pong half-space {x : <x, normal> >= 0}.
struct GroupPresentation {
    GroupKind kind = GroupKind::trivial;
    int n = 3;
    std::vector<Isometry> generators;
    std::vector<std::string> labels;
    std::vector<Eigen::VectorXd> half_spaces;

    std::size_t letter_count() const { return 2 * generators.size(); }
    Isometry letter(int l) const;
    static int inverse_letter(int l) { return l ^ 1; }
    /// "a" for generator a, "A" for its inverse.
    std::string letter_label(int l) const;
    std::string word_label(std::span<const std::uint8_t> word) const;
};

/// One generator as a conjugated boost: c * boost(rapidity, axis) * c^{-1},
/// with c the product of the listed rotations/boosts (left to right).
struct GeneratorSpec {
    double rapidity = 1.0;
    int axis = 1;
    struct Step {
        enum class Kind { rotate, boost } kind = Kind::rotate;
        int i = 1;
        int j = 2;
        double value = 0.0;  // angle or rapidity
    };
    std::vector<Step> conjugator;

    Isometry conjugator_matrix(int n) const;
};

GroupPresentation trivial_group(int n);
GroupPresentation cyclic_group(int n, double ell, int axis = 1);
/// Generators from conjugated-boost specs; Schottky kinds get their ping-pong
/// half-spaces at distance rapidity/2 - 0.5 from the origin along each axis.
GroupPresentation make_group(GroupKind kind, int n, const std::vector<GeneratorSpec>& gens);
/// Two boosts of rapidity `ell` along axes rotated by pi/2 against each other.
GroupPresentation schottky_preset(int n = 3, double ell = 6.0);

/// {kind, n, generators: [{rapidity, axis, conjugator: [{rotate: [i, j, angle]} | {boost: [axis, rapidity]}]}]}
GroupPresentation group_from_json(const nlohmann::json& doc);

struct PingPongCertificate {
    bool disjoint = false;
    /// max over distinct letters of <n_i, n_j>; disjoint closed half-spaces need < -1
    double max_pairing = 0.0;
    /// min over sampled ideal points p outside D_{l^{-1}} of <l p, n_l>, with l p scaled to p0 = 1
    double margin = 0.0;
    std::size_t samples = 0;
    bool valid = false;
};

/// Checks the ping-pong configuration on `samples` ideal points per letter.
PingPongCertificate ping_pong_certificate(const GroupPresentation& g, std::size_t samples = 1000,
                                          std::uint64_t seed = 20240607, double threshold = 0.05);

/// Structural checks: cyclic has one hyperbolic generator, Schottky passes the certificate.
void validate_group(const GroupPresentation& g);

struct OrbitSample {
    std::vector<std::uint8_t> word;
    Isometry element;
    double distance = 0.0;
};

struct EnumerationOptions {
    /// Fixed maximal word length; automatic when empty.
    std::optional<int> max_word_length;
    bool prune = true;
    std::size_t sample_cap = 10'000'000;
};

/// All freely reduced words w with d(x, w y) <= R, breadth first. Ordered by
/// word length, then lexicographically by letters.
std::vector<OrbitSample> enumerate_orbit(const GroupPresentation& g, const HPoint& x, const HPoint& y, double R,
                                         const EnumerationOptions& opts = {});

/// Orbit growth N_shell(k) ~ amplitude * e^{delta k} for shells [k, k+1).
struct GrowthModel {
    double delta = 0.0;
    double amplitude = 0.0;
    double r2 = 1.0;
    bool empty = true;  // no growth at all (trivial group)
};

/// Fits the model to the distances of an orbit enumerated to radius R.
GrowthModel fit_growth(std::span<const double> distances, double R);

struct PoincareSum {
    double partial = 0.0;
    double tail = 0.0;
    std::size_t terms = 0;
};

/// Sum of e^{-s d} over the given distances, plus the tail
/// sum_{k >= ceil(R)} amplitude e^{delta (k + shift)} e^{-s k} (infinite if s <= delta).
PoincareSum poincare_from_distances(std::span<const double> distances, double s, double R, const GrowthModel& model,
                                    double shift = 0.0);

/// Partial Poincare series over d(x, gamma y) <= R with the fitted tail.
PoincareSum poincare_partial(const GroupPresentation& g, double s, const HPoint& x, const HPoint& y, double R);

struct DeltaEstimate {
    double counting = 0.0;
    double abscissa = 0.0;
    double r2 = 0.0;
    bool degenerate = false;  // r2 < 0.9
    std::size_t samples = 0;
    GrowthModel growth;
};

/// Critical exponent from the orbit of the origin within radius R (>= 200 samples).
DeltaEstimate estimate_delta(const GroupPresentation& g, double R);

struct UniformPoincareReport {
    double max_ratio = 0.0;
    std::vector<double> ratios;
    /// max over pairs of max(d(o,x), d(o,y)); the full-series ratio is at most e^{2 s D}
    double diameter_proxy = 0.0;
};

/// Ratios P_R(s; x, y) / P_R(s; o, o). Requires s > delta_hat.
UniformPoincareReport check_uniform_poincare(const GroupPresentation& g, double s,
                                             std::span<const std::pair<HPoint, HPoint>> pairs, double R,
                                             double delta_hat);

}  // namespace hyperwave
