#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "icf/hypersurface.hpp"
#include "icf/math.hpp"
#include "icf/spaceform.hpp"

namespace icf {

struct CorpusSpec {
    int count = 20;
    int n = 3;
    int epsilon = -1;
    double r0 = 1.0;               // base radius
    double amplitude = 0.1;        // per-mode coefficient bound, relative
    std::vector<int> modes = {2, 3, 4};
    std::uint64_t seed = 1;
    double margin_floor = 0.02;    // hypothesis margin a shape must clear
    int N = 96;                    // classification resolution
    int max_attempts = 500;        // rejection budget per shape
};

/// A corpus member is a smooth axially symmetric radial function
/// rho(theta) = r0 (1 + sum_j a_j P_j(cos theta)); keeping the Legendre
/// coefficients lets convergence studies resample the same shape at any N.
struct CorpusShape {
    int n = 3;
    int epsilon = -1;
    double r0 = 1.0;
    std::vector<std::pair<int, double>> coeffs;  // (mode, a_j)
    double margin = 0.0;  // hypothesis margin at the spec resolution
    std::string id;

    double radius(double theta) const {
        double s = 1.0;
        for (const auto& [j, a] : coeffs) s += a * legendre(j, std::cos(theta));
        return r0 * s;
    }

    ProfileGraph discretize(int N) const {
        std::vector<double> rho(N + 1);
        for (int i = 0; i <= N; ++i) rho[i] = radius(i * M_PI / N);
        return ProfileGraph(n, SpaceForm(epsilon), std::move(rho));
    }
};

namespace detail {
inline double hypothesis_margin(const CorpusShape& shape, const CorpusSpec& spec) {
    const auto geo = geometry(shape.discretize(spec.N));
    const auto cls = convexity_classify(geo);
    double margin = (spec.epsilon == -1) ? cls.static_margin : cls.strict_margin;
    if (spec.epsilon == 1) {
        double rmax = 0.0;
        for (const auto& g : geo.nodes) rmax = std::max(rmax, g.rho);
        // stay well inside the hemisphere so flows have room
        if (rmax >= 0.5 * M_PI - 0.1) margin = -1.0;
    }
    return margin;
}
}  // namespace detail

/// Rejection-sample `count` shapes whose hypothesis margin (static convexity
/// for eps = -1, strict convexity plus hemisphere containment for eps = +1,
/// strict convexity for eps = 0) clears the floor. Deterministic in the seed.
inline std::vector<CorpusShape> corpus_generate(const CorpusSpec& spec) {
    if (spec.count < 1 || spec.n < 3) throw std::invalid_argument("corpus_generate: bad spec");
    Rng rng(spec.seed);
    std::vector<CorpusShape> out;
    out.reserve(spec.count);
    for (int s = 0; s < spec.count; ++s) {
        bool accepted = false;
        for (int attempt = 0; attempt < spec.max_attempts && !accepted; ++attempt) {
            CorpusShape shape;
            shape.n = spec.n;
            shape.epsilon = spec.epsilon;
            shape.r0 = spec.r0;
            for (int j : spec.modes)
                shape.coeffs.emplace_back(j, rng.uniform(-spec.amplitude, spec.amplitude));
            try {
                shape.margin = detail::hypothesis_margin(shape, spec);
            } catch (const std::exception&) {
                continue;  // rho dipped below the floor or left the chart
            }
            if (shape.margin >= spec.margin_floor) {
                shape.id = "shape" + std::to_string(s);
                out.push_back(std::move(shape));
                accepted = true;
            }
        }
        if (!accepted)
            throw std::runtime_error(
                "corpus_generate: rejection budget exhausted; lower the amplitude or the floor");
    }
    return out;
}

inline nlohmann::json corpus_to_json(const std::vector<CorpusShape>& shapes,
                                     const CorpusSpec& spec) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : shapes) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (const auto& [j, a] : s.coeffs) coeffs.push_back({{"mode", j}, {"a", a}});
        arr.push_back({{"id", s.id},
                       {"n", s.n},
                       {"epsilon", s.epsilon},
                       {"r0", s.r0},
                       {"coeffs", coeffs},
                       {"margin", s.margin}});
    }
    return {{"spec",
             {{"count", spec.count},
              {"n", spec.n},
              {"epsilon", spec.epsilon},
              {"r0", spec.r0},
              {"amplitude", spec.amplitude},
              {"modes", spec.modes},
              {"seed", spec.seed},
              {"margin_floor", spec.margin_floor},
              {"N", spec.N}}},
            {"shapes", arr}};
}

inline std::vector<CorpusShape> corpus_from_json(const nlohmann::json& j) {
    std::vector<CorpusShape> out;
    for (const auto& e : j.at("shapes")) {
        CorpusShape s;
        s.id = e.at("id").get<std::string>();
        s.n = e.at("n").get<int>();
        s.epsilon = e.at("epsilon").get<int>();
        s.r0 = e.at("r0").get<double>();
        for (const auto& c : e.at("coeffs"))
            s.coeffs.emplace_back(c.at("mode").get<int>(), c.at("a").get<double>());
        s.margin = e.at("margin").get<double>();
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace icf
