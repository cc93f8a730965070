#include "hyperwave/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "hyperwave/error.hpp"

namespace hyperwave {
namespace {

constexpr std::size_t kMinDeltaSamples = 200;
constexpr int kMaxWordLength = 4096;

// unit spacelike normal of {x : <x, n> >= 0}, the half-space beyond distance a along +/- e_axis
Eigen::VectorXd axis_normal(int n, int axis, double a, double sign) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n + 1);
    v[0] = std::sinh(a);
    v[axis] = sign * std::cosh(a);
    return v;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y, double* r2) {
    const double m = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (r2) *r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

void check_radius(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("radius R must be positive and finite");
}

std::vector<double> distances_of(const std::vector<OrbitSample>& orbit) {
    std::vector<double> d;
    d.reserve(orbit.size());
    for (const auto& s : orbit) d.push_back(s.distance);
    return d;
}

struct Node {
    std::vector<std::uint8_t> word;
    Isometry element;
};

// BFS to a fixed word length L; returns the hits per level through `level_hits`
std::vector<OrbitSample> enumerate_fixed(const GroupPresentation& g, const HPoint& x, const HPoint& y, double R,
                                         int L, bool prune, std::size_t cap, double l_disp,
                                         std::vector<std::size_t>* level_hits) {
    std::vector<OrbitSample> out;
    const Isometry id = Isometry::identity(g.n);
    const double d0 = dist(x, y);
    if (d0 <= R) out.push_back({{}, id, d0});
    if (level_hits) level_hits->assign(static_cast<std::size_t>(L) + 1, 0);
    if (level_hits && d0 <= R) (*level_hits)[0] = 1;

    std::vector<Isometry> letters;
    for (std::size_t l = 0; l < g.letter_count(); ++l) letters.push_back(g.letter(static_cast<int>(l)));

    std::vector<Node> frontier{{{}, id}};
    for (int k = 1; k <= L && !frontier.empty(); ++k) {
        std::vector<Node> next;
        for (const Node& node : frontier) {
            for (std::size_t l = 0; l < letters.size(); ++l) {
                if (!node.word.empty() && GroupPresentation::inverse_letter(node.word.back()) == static_cast<int>(l)) {
                    continue;
                }
                Isometry e = compose(node.element, letters[l]);
                const double d = dist(x, apply(e, y));
                if (prune && d - l_disp * (L - k) > R) continue;
                std::vector<std::uint8_t> w = node.word;
                w.push_back(static_cast<std::uint8_t>(l));
                if (d <= R) {
                    out.push_back({w, e, d});
                    if (level_hits) ++(*level_hits)[static_cast<std::size_t>(k)];
                    if (out.size() > cap) {
                        throw DomainError("enumerate_orbit: more than " + std::to_string(cap) +
                                          " orbit points; use a smaller radius R");
                    }
                }
                if (k < L) next.push_back({std::move(w), std::move(e)});
                if (next.size() > cap) {
                    throw DomainError("enumerate_orbit: search frontier exceeds " + std::to_string(cap) +
                                      " words; use a smaller radius R");
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

}  // namespace

std::string to_string(GroupKind kind) {
    switch (kind) {
        case GroupKind::trivial: return "trivial";
        case GroupKind::cyclic: return "cyclic";
        case GroupKind::schottky: return "schottky";
    }
    return "unknown";
}

Isometry GroupPresentation::letter(int l) const {
    if (l < 0 || static_cast<std::size_t>(l) >= letter_count()) throw DomainError("letter index out of range");
    const Isometry& gen = generators[static_cast<std::size_t>(l / 2)];
    return (l % 2 == 0) ? gen : inverse(gen);
}

std::string GroupPresentation::letter_label(int l) const {
    if (l < 0 || static_cast<std::size_t>(l) >= letter_count()) throw DomainError("letter index out of range");
    std::string s = labels[static_cast<std::size_t>(l / 2)];
    if (l % 2 == 1) {
        for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return s;
}

std::string GroupPresentation::word_label(std::span<const std::uint8_t> word) const {
    if (word.empty()) return "e";
    std::string s;
    for (std::uint8_t l : word) s += letter_label(l);
    return s;
}

Isometry GeneratorSpec::conjugator_matrix(int n) const {
    Isometry c = Isometry::identity(n);
    for (const Step& st : conjugator) {
        const Isometry m = st.kind == Step::Kind::rotate ? rotation(n, st.i, st.j, st.value)
                                                         : boost(n, st.value, st.i);
        c = compose(c, m);
    }
    return c;
}

GroupPresentation trivial_group(int n) {
    (void)origin(n);  // dimension check
    GroupPresentation g;
    g.kind = GroupKind::trivial;
    g.n = n;
    return g;
}

GroupPresentation cyclic_group(int n, double ell, int axis) {
    GeneratorSpec spec;
    spec.rapidity = ell;
    spec.axis = axis;
    return make_group(GroupKind::cyclic, n, {spec});
}

GroupPresentation make_group(GroupKind kind, int n, const std::vector<GeneratorSpec>& gens) {
    GroupPresentation g;
    g.kind = kind;
    g.n = n;
    if (gens.size() > 26) throw DomainError("at most 26 generators are supported");
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const GeneratorSpec& spec = gens[i];
        if (!(spec.rapidity > 0.0) || !std::isfinite(spec.rapidity)) {
            throw DomainError("generator rapidity must be positive and finite");
        }
        const Isometry c = spec.conjugator_matrix(n);
        g.generators.push_back(conjugate(boost(n, spec.rapidity, spec.axis), c));
        g.labels.push_back(std::string(1, static_cast<char>('a' + i)));
        if (kind == GroupKind::schottky) {
            const double a = 0.5 * spec.rapidity - 0.5;
            g.half_spaces.push_back(c.matrix() * axis_normal(n, spec.axis, a, +1.0));
            g.half_spaces.push_back(c.matrix() * axis_normal(n, spec.axis, a, -1.0));
        }
    }
    validate_group(g);
    return g;
}

GroupPresentation schottky_preset(int n, double ell) {
    GeneratorSpec a;
    a.rapidity = ell;
    a.axis = 1;
    GeneratorSpec b = a;
    b.conjugator.push_back({GeneratorSpec::Step::Kind::rotate, 1, 2, std::numbers::pi / 2.0});
    return make_group(GroupKind::schottky, n, {a, b});
}

GroupPresentation group_from_json(const nlohmann::json& doc) {
    try {
        const std::string kind = doc.at("kind").get<std::string>();
        const int n = doc.at("n").get<int>();
        std::vector<GeneratorSpec> gens;
        if (doc.contains("generators")) {
            for (const auto& jg : doc.at("generators")) {
                GeneratorSpec spec;
                spec.rapidity = jg.at("rapidity").get<double>();
                spec.axis = jg.value("axis", 1);
                if (jg.contains("conjugator")) {
                    for (const auto& js : jg.at("conjugator")) {
                        GeneratorSpec::Step st;
                        if (js.contains("rotate")) {
                            const auto& v = js.at("rotate");
                            st.kind = GeneratorSpec::Step::Kind::rotate;
                            st.i = v.at(0).get<int>();
                            st.j = v.at(1).get<int>();
                            st.value = v.at(2).get<double>();
                        } else if (js.contains("boost")) {
                            const auto& v = js.at("boost");
                            st.kind = GeneratorSpec::Step::Kind::boost;
                            st.i = v.at(0).get<int>();
                            st.value = v.at(1).get<double>();
                        } else {
                            throw DomainError("conjugator steps must be {rotate: [i, j, angle]} or {boost: [axis, rapidity]}");
                        }
                        spec.conjugator.push_back(st);
                    }
                }
                gens.push_back(spec);
            }
        }
        GroupKind k;
        if (kind == "trivial") {
            if (!gens.empty()) throw DomainError("trivial group takes no generators");
            return trivial_group(n);
        } else if (kind == "cyclic") {
            k = GroupKind::cyclic;
        } else if (kind == "schottky") {
            k = GroupKind::schottky;
        } else {
            throw DomainError("unknown group kind '" + kind + "' (expected trivial, cyclic or schottky)");
        }
        GroupPresentation g = make_group(k, n, gens);
        if (doc.contains("labels")) {
            const auto labels = doc.at("labels").get<std::vector<std::string>>();
            if (labels.size() != g.generators.size()) throw DomainError("one label per generator expected");
            for (const auto& s : labels) {
                if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) {
                    throw DomainError("generator labels must start with a lowercase letter");
                }
            }
            g.labels = labels;
        }
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed group document: ") + e.what());
    }
}

PingPongCertificate ping_pong_certificate(const GroupPresentation& g, std::size_t samples, std::uint64_t seed,
                                          double threshold) {
    PingPongCertificate cert;
    const std::size_t letters = g.letter_count();
    if (g.half_spaces.size() != letters || letters == 0) return cert;
    cert.max_pairing = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < letters; ++i) {
        for (std::size_t j = i + 1; j < letters; ++j) {
            cert.max_pairing = std::max(cert.max_pairing, minkowski(g.half_spaces[i], g.half_spaces[j]));
        }
    }
    cert.disjoint = letters < 2 || cert.max_pairing < -1.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    cert.margin = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < letters; ++l) {
        const Eigen::MatrixXd m = g.letter(static_cast<int>(l)).matrix();
        const Eigen::VectorXd& source = g.half_spaces[l ^ 1];
        const Eigen::VectorXd& target = g.half_spaces[l];
        std::size_t taken = 0;
        while (taken < samples) {
            Eigen::VectorXd p(g.n + 1);
            p[0] = 1.0;
            for (int i = 1; i <= g.n; ++i) p[i] = gauss(rng);
            p.tail(g.n).normalize();
            if (minkowski(p, source) >= 0.0) continue;  // inside the source half-space
            Eigen::VectorXd q = m * p;
            q /= q[0];
            cert.margin = std::min(cert.margin, minkowski(q, target));
            ++taken;
        }
        cert.samples += taken;
    }
    cert.valid = cert.disjoint && cert.margin > threshold;
    return cert;
}

void validate_group(const GroupPresentation& g) {
    switch (g.kind) {
        case GroupKind::trivial:
            if (!g.generators.empty()) throw DomainError("trivial group has no generators");
            break;
        case GroupKind::cyclic:
            if (g.generators.size() != 1) throw DomainError("cyclic group needs exactly one generator");
            if (!(translation_length(g.generators[0]) > 0.0)) {
                throw DomainError("cyclic generator must be hyperbolic (translation length > 0)");
            }
            break;
        case GroupKind::schottky: {
            if (g.generators.empty()) throw DomainError("Schottky group needs at least one generator");
            const PingPongCertificate cert = ping_pong_certificate(g);
            if (!cert.valid) {
                throw DomainError("Schottky ping-pong certificate fails (max pairing " +
                                  std::to_string(cert.max_pairing) + ", margin " + std::to_string(cert.margin) +
                                  ")");
            }
            break;
        }
    }
    if (g.labels.size() != g.generators.size()) throw DomainError("one label per generator expected");
}

std::vector<OrbitSample> enumerate_orbit(const GroupPresentation& g, const HPoint& x, const HPoint& y, double R,
                                         const EnumerationOptions& opts) {
    check_radius(R);
    if (x.dim() != g.n || y.dim() != g.n) throw DomainError("enumerate_orbit: point dimension differs from group");
    if (g.generators.empty()) return enumerate_fixed(g, x, y, R, 0, false, opts.sample_cap, 0.0, nullptr);

    double l_disp = 0.0;
    double tau_min = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < g.letter_count(); ++l) {
        const Isometry e = g.letter(static_cast<int>(l));
        l_disp = std::max(l_disp, dist(y, apply(e, y)));
        tau_min = std::min(tau_min, translation_length(e));
    }
    if (opts.max_word_length) {
        if (*opts.max_word_length < 0) throw DomainError("max_word_length must be >= 0");
        return enumerate_fixed(g, x, y, R, *opts.max_word_length, opts.prune, opts.sample_cap, l_disp, nullptr);
    }
    if (!(tau_min > 0.0)) throw DomainError("enumerate_orbit: automatic word length needs hyperbolic letters");

    // displacement grows roughly by tau_min per letter; extend while the last levels still hit the ball
    const HPoint o = origin(g.n);
    int L = static_cast<int>(std::ceil((R + dist(o, x) + dist(o, y)) / tau_min)) + 2;
    for (;;) {
        if (L > kMaxWordLength) throw DomainError("enumerate_orbit: word length bound exceeded; use a smaller R");
        std::vector<std::size_t> hits;
        auto out = enumerate_fixed(g, x, y, R, L, opts.prune, opts.sample_cap, l_disp, &hits);
        const std::size_t tail_hits = hits[static_cast<std::size_t>(L)] + hits[static_cast<std::size_t>(L - 1)];
        if (tail_hits == 0) return out;
        L += std::max(2, L / 2);
    }
}

GrowthModel fit_growth(std::span<const double> distances, double R) {
    check_radius(R);
    GrowthModel model;
    model.empty = distances.size() <= 1;
    const int top = static_cast<int>(std::floor(R));
    const int lo = static_cast<int>(std::ceil(0.5 * R));
    if (top - lo < 1) {
        // too short a range for a slope; flat density estimate
        model.amplitude = static_cast<double>(distances.size()) / std::max(1.0, R);
        return model;
    }
    std::vector<double> xs, ys;
    for (int r = lo; r <= top; ++r) {
        const auto count = std::count_if(distances.begin(), distances.end(), [&](double d) { return d <= r; });
        if (count == 0) continue;
        xs.push_back(r);
        ys.push_back(std::log(static_cast<double>(count)));
    }
    if (xs.size() >= 2) model.delta = std::max(0.0, least_squares_slope(xs, ys, &model.r2));
    double acc = 0.0;
    int shells = 0;
    for (int k = lo; k < top; ++k, ++shells) {
        const auto count =
            std::count_if(distances.begin(), distances.end(), [&](double d) { return d >= k && d < k + 1; });
        acc += static_cast<double>(count) * std::exp(-model.delta * k);
    }
    model.amplitude = shells > 0 ? acc / shells : 0.0;
    return model;
}

PoincareSum poincare_from_distances(std::span<const double> distances, double s, double R, const GrowthModel& model,
                                    double shift) {
    if (!(s > 0.0)) throw DomainError("Poincare series needs s > 0");
    PoincareSum out;
    for (double d : distances) {
        if (d <= R) {
            out.partial += std::exp(-s * d);
            ++out.terms;
        }
    }
    if (model.empty || model.amplitude == 0.0) return out;
    if (s <= model.delta) {
        out.tail = std::numeric_limits<double>::infinity();
        return out;
    }
    const double K = std::ceil(R);
    const double q = std::exp(model.delta - s);
    out.tail = model.amplitude * std::exp(model.delta * shift) * std::exp((model.delta - s) * K) / (1.0 - q);
    return out;
}

PoincareSum poincare_partial(const GroupPresentation& g, double s, const HPoint& x, const HPoint& y, double R) {
    if (!(s > 0.0)) throw DomainError("Poincare series needs s > 0");
    const auto orbit = enumerate_orbit(g, x, y, R);
    const auto d = distances_of(orbit);
    GrowthModel model;
    if (!g.generators.empty()) model = fit_growth(d, R);
    return poincare_from_distances(d, s, R, model);
}

DeltaEstimate estimate_delta(const GroupPresentation& g, double R) {
    check_radius(R);
    const HPoint o = origin(g.n);
    const auto d = distances_of(enumerate_orbit(g, o, o, R));
    if (d.size() < kMinDeltaSamples) {
        throw DomainError("estimate_delta: only " + std::to_string(d.size()) + " orbit points within R = " +
                          std::to_string(R) + " (need 200); increase R");
    }
    DeltaEstimate est;
    est.samples = d.size();
    est.growth = fit_growth(d, R);
    est.counting = est.growth.delta;
    est.r2 = est.growth.r2;
    est.degenerate = est.r2 < 0.9;

    // slope in k of log sum_{shell k} e^{-s d}; it decreases like delta - s
    const int top = static_cast<int>(std::floor(R));
    const int lo = static_cast<int>(std::ceil(0.5 * R));
    auto shell_slope = [&](double s) {
        std::vector<double> xs, ys;
        for (int k = lo; k < top; ++k) {
            double acc = 0.0;
            for (double v : d) {
                if (v >= k && v < k + 1) acc += std::exp(-s * (v - k));
            }
            if (acc > 0.0) {
                xs.push_back(k);
                ys.push_back(std::log(acc) - s * k);
            }
        }
        return xs.size() >= 2 ? least_squares_slope(xs, ys, nullptr) : -s;
    };
    double a = 0.0, b = static_cast<double>(g.n);
    if (shell_slope(a) <= 0.0) {
        est.abscissa = 0.0;
    } else {
        while (shell_slope(b) > 0.0) b *= 2.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (a + b);
            (shell_slope(mid) > 0.0 ? a : b) = mid;
        }
        est.abscissa = 0.5 * (a + b);
    }
    return est;
}

UniformPoincareReport check_uniform_poincare(const GroupPresentation& g, double s,
                                             std::span<const std::pair<HPoint, HPoint>> pairs, double R,
                                             double delta_hat) {
    if (!(s > delta_hat)) {
        throw DomainError("check_uniform_poincare: s = " + std::to_string(s) + " <= delta_hat = " +
                          std::to_string(delta_hat) + "; the series diverges");
    }
    const HPoint o = origin(g.n);
    const double base = poincare_partial(g, s, o, o, R).partial;
    UniformPoincareReport rep;
    for (const auto& [x, y] : pairs) {
        const double v = poincare_partial(g, s, x, y, R).partial;
        rep.ratios.push_back(v / base);
        rep.max_ratio = std::max(rep.max_ratio, v / base);
        rep.diameter_proxy = std::max({rep.diameter_proxy, dist(o, x), dist(o, y)});
    }
    return rep;
}

}  // namespace hyperwave
