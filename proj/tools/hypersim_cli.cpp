// Copyright 2026 the hypersim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypersim/io.hpp"
#include "hypersim/metrics.hpp"
#include "hypersim/netlist.hpp"

namespace fs = std::filesystem;
using namespace hypersim;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

std::vector<double> split_doubles(const std::string& text, char sep) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        size_t used = 0;
        out.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    }
    return out;
}

ReflectionPair parse_pair_option(const std::string& text) {
    if (text == "ideal") return ReflectionPair::make_ideal();
    if (text.rfind("x=", 0) == 0) return resonant_pair(std::stod(text.substr(2)));
    if (text.rfind("r=", 0) == 0) {
        const size_t split = text.find(",r0=");
        if (split == std::string::npos)
            throw std::invalid_argument("pair: expected r=<re>,<im>,r0=<re>,<im>");
        const std::vector<double> r = split_doubles(text.substr(2, split - 2), ',');
        const std::vector<double> r0 = split_doubles(text.substr(split + 4), ',');
        if (r.size() != 2 || r0.size() != 2)
            throw std::invalid_argument("pair: expected r=<re>,<im>,r0=<re>,<im>");
        ReflectionPair pair;
        pair.r = Complex{r[0], r[1]};
        pair.r0 = Complex{r0[0], r0[1]};
        pair.validate();
        return pair;
    }
    throw std::invalid_argument("pair: expected ideal, x=<val> or r=...,r0=...");
}

InputSpec parse_input_option(const std::string& text, const NetlistDocument& doc) {
    if (text.rfind("angles=", 0) == 0) {
        const std::vector<double> a = split_doubles(text.substr(7), ',');
        if (a.size() != 6)
            throw std::invalid_argument("input: angles= needs six comma-separated values");
        return InputSpec::from_angles(AngleTuple{a[0], a[1], a[2], a[3], a[4], a[5]});
    }
    if (text.rfind("basis=", 0) == 0) {
        std::vector<std::string> labels;
        std::stringstream ss(text.substr(6));
        std::string item;
        while (std::getline(ss, item, ',')) labels.push_back(item);
        if (labels.size() != 6)
            throw std::invalid_argument(
                "input: basis= needs pol,mode,pol,mode,pol,mode labels");
        auto pol_bit = [](const std::string& label) {
            if (label == "R") return 0;
            if (label == "L") return 1;
            throw std::invalid_argument("input: polarization label must be R or L");
        };
        auto mode_bit = [&](const std::string& label, int slot) {
            for (size_t p = 0; p < doc.photons.size(); ++p)
                for (size_t m = 0; m < doc.photons[p].modes.size(); ++m)
                    if (doc.photons[p].modes[m] == label) {
                        if (static_cast<int>(p) != slot)
                            throw std::invalid_argument("input: mode '" + label +
                                                        "' belongs to another photon");
                        if (m > 1)
                            throw std::invalid_argument(
                                "input: the transient mode is not a gate input");
                        return static_cast<int>(m);
                    }
            throw std::invalid_argument("input: unknown mode '" + label + "'");
        };
        return basis_input_spec(pol_bit(labels[0]), mode_bit(labels[1], 0),
                                pol_bit(labels[2]), mode_bit(labels[3], 1),
                                pol_bit(labels[4]), mode_bit(labels[5], 2));
    }
    throw std::invalid_argument("input: expected angles=... or basis=...");
}

std::string outcome_text(const MeasurementRecord& rec, const NetlistDocument& doc) {
    std::ostringstream os;
    for (int nv : doc.script.measurement_order) {
        os << doc.nvs[static_cast<size_t>(nv - 1)].name << '='
           << (rec.outcomes[static_cast<size_t>(nv - 1)] == kOutcomePlusPrime ? "+'"
                                                                              : "-'")
           << ' ';
    }
    return os.str();
}

int cmd_truth_table() {
    std::cout << "building the transfer matrix from the canonical circuit..." << std::endl;
    const TruthTable sim = ideal_transfer_matrix();
    const TruthTable ref = reference_truth_table();
    for (int k = 0; k < 64; ++k) {
        const double v = sim.at(k, k).real();
        std::cout << "input " << k << ": " << (v >= 0.0 ? "+1" : "-1") << '\n';
    }
    const double dist = truth_table_distance(ref, sim);
    std::cout << "max deviation from the double controlled-controlled-Z: "
              << format_number(dist) << '\n';
    if (dist < 1e-10) {
        std::cout << "PASS" << std::endl;
        return kExitSuccess;
    }
    std::cout << "FAIL" << std::endl;
    return kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator of a hyper-parallel three-photon controlled-controlled-"
                 "phase-flip gate mediated by NV-center cavities"};
    app.require_subcommand(1);
    app.fallthrough();
    int workers = default_worker_count();
    app.add_option("--workers", workers, "worker thread count (env HYPERSIM_WORKERS)")
        ->check(CLI::PositiveNumber);

    // truth-table
    CLI::App* truth = app.add_subcommand(
        "truth-table", "verify the simulated gate against its target operation");

    // sweep
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "average fidelity and efficiency versus coupling ratio");
    double xmin = 0.5, xmax = 5.0;
    int points = 10;
    std::string sampler_name = "mc";
    long long samples = 100000;
    int points_per_angle = 8;
    std::optional<uint64_t> seed;
    std::string out_csv;
    std::string out_svg;
    sweep_cmd->add_option("--xmin", xmin, "smallest coupling ratio (>= 0.5)");
    sweep_cmd->add_option("--xmax", xmax, "largest coupling ratio");
    sweep_cmd->add_option("--points", points, "grid size")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--sampler", sampler_name, "mc or quad");
    sweep_cmd->add_option("--samples", samples, "Monte Carlo sample count");
    sweep_cmd->add_option("--points-per-angle", points_per_angle,
                          "quadrature nodes per angle");
    sweep_cmd->add_option("--seed", seed, "Monte Carlo seed (required for mc)");
    sweep_cmd->add_option("--out", out_csv, "CSV output path")->required();
    sweep_cmd->add_option("--svg", out_svg, "optional SVG chart path");

    // scan-reflection
    CLI::App* scan_cmd = app.add_subcommand(
        "scan-reflection", "reflection amplitude versus probe detuning");
    double scan_g = 1.0, scan_kappa = 1.0, scan_gamma = 1.0;
    std::string detuning_range = "-5:5";
    int scan_points = 101;
    std::string scan_out;
    scan_cmd->add_option("--g", scan_g, "coupling rate");
    scan_cmd->add_option("--kappa", scan_kappa, "cavity damping rate");
    scan_cmd->add_option("--gamma", scan_gamma, "emitter decay rate");
    scan_cmd->add_option("--detuning-range", detuning_range,
                         "probe detuning range min:max");
    scan_cmd->add_option("--points", scan_points, "sample count")
        ->check(CLI::PositiveNumber);
    scan_cmd->add_option("--out", scan_out, "CSV output path (default stdout)");

    // simulate
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run a netlist circuit");
    std::string netlist_path;
    std::string pair_text = "ideal";
    std::string input_text = "basis=R,a1,R,b1,R,c1";
    std::string branch_text = "enumerate";
    std::string dump_dir;
    uint64_t sim_seed = 0;
    sim_cmd->add_option("--netlist", netlist_path, "netlist file")->required();
    sim_cmd->add_option("--pair", pair_text, "ideal, x=<val> or r=<re>,<im>,r0=<re>,<im>");
    sim_cmd->add_option("--input", input_text, "angles=<6 floats> or basis=<6 labels>");
    sim_cmd->add_option("--branch", branch_text, "enumerate, sample or fixed=<+/- list>");
    sim_cmd->add_option("--seed", sim_seed, "seed for --branch sample");
    sim_cmd->add_option("--dump-checkpoints", dump_dir,
                        "directory for per-step state snapshots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }

    try {
        if (*truth) return cmd_truth_table();

        if (*sweep_cmd) {
            if (xmin < 0.5 || xmax <= xmin)
                throw std::invalid_argument("sweep: need 0.5 <= xmin < xmax");
            Sampler sampler = Sampler::product_quadrature(points_per_angle);
            if (sampler_name == "mc") {
                if (!seed.has_value())
                    throw std::invalid_argument(
                        "sweep: --seed is required with --sampler mc");
                sampler = Sampler::monte_carlo(samples, *seed);
            } else if (sampler_name != "quad") {
                throw std::invalid_argument("sweep: sampler must be mc or quad");
            }
            std::vector<double> grid;
            for (int i = 0; i < points; ++i)
                grid.push_back(points == 1 ? xmin
                                           : xmin + (xmax - xmin) * i / (points - 1));
            const SweepTable table = sweep(grid, sampler, workers);
            std::ostringstream csv;
            write_sweep_csv(table, csv);
            write_file(out_csv, csv.str());
            if (!out_svg.empty()) write_file(out_svg, sweep_svg(table));
            std::cout << "wrote " << table.rows.size() << " rows to " << out_csv
                      << std::endl;
            if (!table.fidelity_nondecreasing)
                std::cout << "note: fidelity not monotone within 3 standard errors"
                          << std::endl;
            if (!table.efficiency_nondecreasing)
                std::cout << "note: efficiency not monotone within 3 standard errors"
                          << std::endl;
            return kExitSuccess;
        }

        if (*scan_cmd) {
            const std::vector<double> range = split_doubles(detuning_range, ':');
            if (range.size() != 2 || range[1] < range[0])
                throw std::invalid_argument("scan-reflection: bad --detuning-range");
            std::vector<ReflectionScanRow> rows;
            for (int i = 0; i < scan_points; ++i) {
                CavityParams p;
                p.g = scan_g;
                p.kappa = scan_kappa;
                p.gamma = scan_gamma;
                p.omega_c = p.omega_0 = 0.0;
                p.omega_p = scan_points == 1
                                ? range[0]
                                : range[0] + (range[1] - range[0]) * i / (scan_points - 1);
                rows.push_back({p.omega_p - p.omega_c, reflection_coefficient(p)});
            }
            std::ostringstream csv;
            write_reflection_scan_csv(rows, csv);
            if (scan_out.empty()) {
                std::cout << csv.str();
            } else {
                write_file(scan_out, csv.str());
                std::cout << "wrote " << rows.size() << " rows to " << scan_out
                          << std::endl;
            }
            return kExitSuccess;
        }

        if (*sim_cmd) {
            const NetlistDocument doc = parse_netlist(read_file(netlist_path));
            const ReflectionPair pair = parse_pair_option(pair_text);
            const InputSpec spec = parse_input_option(input_text, doc);

            BranchPolicy policy = BranchPolicy::enumerate();
            if (branch_text == "enumerate") {
                policy = BranchPolicy::enumerate();
            } else if (branch_text == "sample") {
                policy = BranchPolicy::sample(sim_seed);
            } else if (branch_text.rfind("fixed=", 0) == 0) {
                const std::string pattern = branch_text.substr(6);
                if (pattern.size() != doc.script.measurement_order.size())
                    throw std::invalid_argument(
                        "branch: fixed= needs one +/- per measured NV, in measurement "
                        "order");
                policy.mode = BranchPolicy::Mode::fixed;
                for (size_t k = 0; k < pattern.size(); ++k) {
                    const int nv = doc.script.measurement_order[k];
                    if (pattern[k] != '+' && pattern[k] != '-')
                        throw std::invalid_argument("branch: fixed= uses only + and -");
                    policy.fixed_outcomes[static_cast<size_t>(nv - 1)] =
                        pattern[k] == '+' ? kOutcomePlusPrime : kOutcomeMinusPrime;
                }
            } else {
                throw std::invalid_argument(
                    "branch: expected enumerate, sample or fixed=...");
            }

            const HyperState input = product_input(spec, doc.script.spin_init);
            const RunResult res = run(input, doc.script, pair, policy);

            std::cout << "pre-measurement squared norm: "
                      << format_number(res.pre_measurement.squared_norm()) << '\n';
            if (res.failed) {
                std::cout << "gate failure: the photons were fully lost before the "
                             "measurements"
                          << std::endl;
                return kExitVerificationFailure;
            }
            for (const BranchOutcome& b : res.branches) {
                std::cout << "branch " << outcome_text(b.record, doc)
                          << "probability=" << format_number(b.record.probability);
                if (b.failed) std::cout << " (vanished)";
                std::cout << '\n';
            }

            if (!dump_dir.empty()) {
                fs::create_directories(dump_dir);
                for (size_t k = 0; k < res.checkpoints.size(); ++k) {
                    const std::string name =
                        "step_" + std::to_string(res.checkpoint_steps[k]) + ".txt";
                    write_file((fs::path(dump_dir) / name).string(),
                               snapshot_to_text(res.checkpoints[k]));
                }
                write_file((fs::path(dump_dir) / "pre_measurement.txt").string(),
                           snapshot_to_text(res.pre_measurement));
                std::cout << "checkpoints written to " << dump_dir << std::endl;
            }
            return kExitSuccess;
        }
    } catch (const NetlistError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }
    return kExitUsage;
}
