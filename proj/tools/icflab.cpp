// Command-line laboratory for constrained inverse curvature flows and the
// associated geometric inequality checks in the three space forms.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "icf/icf.hpp"

using nlohmann::json;

namespace {

icf::PointwiseGeometry load_geometry(const std::string& path) {
    const json j = json::parse(icf::read_text_file(path));
    if (j.at("representation") == "profile") return icf::geometry(icf::profile_from_json(j));
    return icf::geometry(icf::sphere_from_json(j));
}

icf::ProfileGraph load_profile(const std::string& shape_path, const std::string& corpus_path,
                               int index, int N) {
    if (!shape_path.empty()) {
        const json j = json::parse(icf::read_text_file(shape_path));
        return icf::profile_from_json(j);
    }
    const auto shapes = icf::corpus_from_json(json::parse(icf::read_text_file(corpus_path)));
    if (index < 0 || index >= int(shapes.size()))
        throw std::runtime_error("corpus index out of range");
    return shapes[index].discretize(N);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypersurface flow and inequality laboratory"};
    app.require_subcommand(1);

    // ---- corpus ----
    auto* c_corpus = app.add_subcommand("corpus", "generate a randomized shape corpus");
    icf::CorpusSpec spec;
    std::string corpus_out = "corpus.json";
    c_corpus->add_option("--eps", spec.epsilon, "ambient curvature sign (-1, 0, +1)");
    c_corpus->add_option("--n", spec.n, "ambient dimension");
    c_corpus->add_option("--count", spec.count, "number of shapes");
    c_corpus->add_option("--amplitude", spec.amplitude, "Legendre coefficient bound");
    c_corpus->add_option("--r0", spec.r0, "base radius");
    c_corpus->add_option("--modes", spec.modes, "Legendre modes");
    c_corpus->add_option("--seed", spec.seed, "RNG seed");
    c_corpus->add_option("--margin-floor", spec.margin_floor, "hypothesis margin floor");
    c_corpus->add_option("--N", spec.N, "classification resolution");
    c_corpus->add_option("--out", corpus_out, "output JSON path");

    // ---- simulate ----
    auto* c_sim = app.add_subcommand("simulate", "run the constrained flow on one shape");
    std::string sim_shape, sim_corpus, sim_out = "run";
    int sim_index = 0, sim_N = 96, sim_k = 1;
    std::vector<std::string> sim_weights{"pow:2"};
    icf::FlowConfig fcfg;
    c_sim->add_option("--shape", sim_shape, "profile shape JSON");
    c_sim->add_option("--corpus", sim_corpus, "corpus JSON");
    c_sim->add_option("--index", sim_index, "corpus shape index");
    c_sim->add_option("--N", sim_N, "profile resolution (corpus shapes)");
    c_sim->add_option("--k", sim_k, "flow order");
    c_sim->add_option("--weight", sim_weights, "weight ids (first drives k=1 monitors)");
    c_sim->add_option("--dt", fcfg.dt_init, "initial/maximum time step");
    c_sim->add_option("--t-max", fcfg.t_max, "time horizon");
    c_sim->add_option("--sample-every", fcfg.sample_every, "steps between samples");
    c_sim->add_option("--tol", fcfg.tol.monotonicity_slack, "monotonicity slack");
    c_sim->add_option("--roundness", fcfg.tol.roundness_stop, "stopping pinch threshold");
    c_sim->add_option("--out", sim_out, "output prefix (.csv, .json)");

    // ---- verify ----
    auto* c_ver = app.add_subcommand("verify", "check one inequality on one shape");
    std::string ver_shape, ver_corpus, ver_thm = "1.1", ver_weight = "pow:2";
    std::string ver_out;
    int ver_index = 0, ver_N = 96, ver_k = 2, ver_l = 0;
    double ver_alpha = 2.0;
    c_ver->add_option("--shape", ver_shape, "shape JSON (profile or sphere grid)");
    c_ver->add_option("--corpus", ver_corpus, "corpus JSON");
    c_ver->add_option("--index", ver_index, "corpus shape index");
    c_ver->add_option("--N", ver_N, "profile resolution (corpus shapes)");
    c_ver->add_option("--theorem", ver_thm, "one of 1.1, 1.2, 1.4, 1.6");
    c_ver->add_option("--k", ver_k, "curvature order");
    c_ver->add_option("--l", ver_l, "quermassintegral order");
    c_ver->add_option("--weight", ver_weight, "weight id");
    c_ver->add_option("--alpha", ver_alpha, "power for theorem 1.2");
    c_ver->add_option("--out", ver_out, "append gap CSV here");

    // ---- convergence ----
    auto* c_conv = app.add_subcommand("convergence", "identity residuals under refinement");
    std::string conv_corpus, conv_out;
    int conv_index = 0, conv_base = 64, conv_levels = 4, conv_k = 1;
    c_conv->add_option("--corpus", conv_corpus, "corpus JSON")->required();
    c_conv->add_option("--index", conv_index, "corpus shape index");
    c_conv->add_option("--N", conv_base, "coarsest resolution");
    c_conv->add_option("--levels", conv_levels, "number of doublings");
    c_conv->add_option("--k", conv_k, "curvature order for the integral identities");
    c_conv->add_option("--out", conv_out, "output CSV path");

    // ---- report ----
    auto* c_rep = app.add_subcommand("report", "aggregate gap CSV files into a summary");
    std::vector<std::string> rep_inputs;
    std::string rep_out = "summary.json";
    c_rep->add_option("--gaps", rep_inputs, "gap CSV files")->required();
    c_rep->add_option("--out", rep_out, "summary JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_corpus) {
            const auto shapes = icf::corpus_generate(spec);
            icf::write_text_file(corpus_out, icf::corpus_to_json(shapes, spec).dump(2) + "\n");
            std::cout << "wrote " << shapes.size() << " shapes to " << corpus_out << "\n";
        } else if (*c_sim) {
            auto g = load_profile(sim_shape, sim_corpus, sim_index, sim_N);
            fcfg.k = sim_k;
            fcfg.weight = icf::make_weight(sim_weights.at(0));
            for (std::size_t i = 1; i < sim_weights.size(); ++i)
                fcfg.extra_weights.push_back(icf::make_weight(sim_weights[i]));
            const auto run = icf::flow_run(g, fcfg);
            icf::write_text_file(sim_out + ".csv", icf::flow_csv(run));
            json manifest = icf::flow_manifest(run);
            manifest["audit"] = icf::audit_to_json(icf::monotonicity_audit(run));
            icf::write_text_file(sim_out + ".json", manifest.dump(2) + "\n");
            std::cout << (run.converged ? "converged" : "stopped") << " after t="
                      << run.samples.back().t << ", r_inf=" << run.r_inf << "\n";
        } else if (*c_ver) {
            icf::PointwiseGeometry geo;
            if (!ver_shape.empty())
                geo = load_geometry(ver_shape);
            else
                geo = icf::geometry(load_profile("", ver_corpus, ver_index, ver_N));
            std::vector<icf::GapReport> reports;
            if (ver_thm == "1.1") {
                auto [a, b] = icf::verify_thm_1_1(geo, ver_k, ver_l, icf::make_weight(ver_weight));
                reports = {a, b};
            } else if (ver_thm == "1.2") {
                auto [a, b] = icf::verify_cor_1_2(geo, ver_k, ver_l, ver_alpha);
                reports = {a, b};
            } else if (ver_thm == "1.4") {
                auto [a, b] = icf::verify_thm_1_4(geo, icf::make_weight(ver_weight));
                reports = {a, b};
            } else if (ver_thm == "1.6") {
                reports = {icf::verify_thm_1_6(geo, icf::make_weight(ver_weight))};
            } else {
                throw std::runtime_error("unknown theorem id " + ver_thm);
            }
            std::string csv = icf::gap_csv_header() + "\n";
            for (const auto& r : reports) {
                csv += icf::gap_csv_row(ver_shape.empty() ? "corpus:" + std::to_string(ver_index)
                                                          : ver_shape,
                                        r) +
                       "\n";
                std::cout << r.theorem << " lhs=" << icf::fmt17(r.lhs)
                          << " rhs=" << icf::fmt17(r.rhs) << " gap=" << icf::fmt17(r.gap)
                          << (r.hypothesis_ok ? "" : " [hypothesis: " + r.failure + "]") << "\n";
            }
            if (!ver_out.empty()) icf::write_text_file(ver_out, csv);
        } else if (*c_conv) {
            const auto shapes =
                icf::corpus_from_json(json::parse(icf::read_text_file(conv_corpus)));
            const auto& shape = shapes.at(conv_index);
            std::string csv = "N,minkowski,divergence,hessian,gradient\n";
            std::cout << "N        minkowski     divergence    hessian       gradient\n";
            for (int lvl = 0; lvl < conv_levels; ++lvl) {
                const int N = conv_base << lvl;
                const auto geo = icf::geometry(shape.discretize(N));
                const double rm = icf::minkowski_residual(geo, conv_k);
                const double rd = icf::divergence_identity_residual(geo, conv_k);
                const double rh = icf::hessian_identity_residual(geo);
                const double rg = icf::gradient_identity_residual(geo);
                csv += icf::join_csv({std::to_string(N), icf::fmt17(rm), icf::fmt17(rd),
                                      icf::fmt17(rh), icf::fmt17(rg)}) +
                       "\n";
                std::printf("%-8d %-13.4e %-13.4e %-13.4e %-13.4e\n", N, rm, rd, rh, rg);
            }
            if (!conv_out.empty()) icf::write_text_file(conv_out, csv);
        } else if (*c_rep) {
            int rows = 0, hyp_fail = 0, negative = 0, equalities = 0;
            double min_rel = 1e300;
            for (const auto& path : rep_inputs) {
                std::istringstream in(icf::read_text_file(path));
                std::string line;
                std::getline(in, line);  // header
                while (std::getline(in, line)) {
                    if (line.empty()) continue;
                    std::vector<std::string> cells;
                    std::string cell;
                    std::istringstream ls(line);
                    while (std::getline(ls, cell, ',')) cells.push_back(cell);
                    if (cells.size() < 11) continue;
                    ++rows;
                    if (cells[10] == "0") {
                        ++hyp_fail;
                        continue;
                    }
                    const double rel = std::stod(cells[8]);
                    min_rel = std::min(min_rel, rel);
                    if (rel < -1e-6) ++negative;
                    if (cells[9] == "1") ++equalities;
                }
            }
            const json summary = {{"rows", rows},
                                  {"hypothesis_failures", hyp_fail},
                                  {"negative_gaps", negative},
                                  {"equality_cases", equalities},
                                  {"min_rel_gap", rows > hyp_fail ? min_rel : 0.0}};
            icf::write_text_file(rep_out, summary.dump(2) + "\n");
            std::cout << summary.dump(2) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
