#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oneswitch/json_io.hpp"
#include "oneswitch/oneswitch.hpp"

namespace {

using oneswitch::io::json;

/// Exit codes: 0 success, 1 I/O or parse, 2 domain validation, 3 verification
/// failure. Stable contract.
struct IoError {
    std::string message;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError{"cannot open " + path};
    return json::parse(in);
}

oneswitch::PreferenceModel load_model(const std::string& path) {
    return oneswitch::io::model_from_json(read_json_file(path));
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

struct VerifyOptions {
    std::string model_path;
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::uint64_t budget = 20000;
    int instances = 500;
    double sigma_max = oneswitch::kDefaultSigmaMax;
    int grid_points = oneswitch::kDefaultGridPoints;
    bool expect_violation = false;
};

int run_verify(const VerifyOptions& opt) {
    using namespace oneswitch;
    const PreferenceModel model = load_model(opt.model_path);

    int instances = 0;
    json violations = json::array();
    double max_residual = 0.0;

    const bool run_one_switch = opt.suite == "all" || opt.suite == "one-switch";
    const bool run_zero_set = opt.suite == "all" || opt.suite == "zero-set";
    const bool run_impatience = opt.suite == "all" || opt.suite == "impatience";
    const bool run_weak = opt.suite == "all" || opt.suite == "weak-one-switch";
    if (!run_one_switch && !run_zero_set && !run_impatience && !run_weak)
        throw DomainError(Errc::ParamOutOfRange,
                          "unknown suite; expected one-switch, zero-set, impatience, weak-one-switch or all");

    if (run_one_switch) {
        const SearchResult result = double_switch_search(model, opt.seed, opt.budget);
        instances += static_cast<int>(result.attempts);
        if (result.violation) {
            json witness = io::to_json(*result.violation);
            witness["kind"] = "double_switch";
            violations.push_back(std::move(witness));
        }
    }
    if (run_zero_set) {
        std::mt19937_64 rng(opt.seed);
        for (int i = 0; i < opt.instances; ++i) {
            const DatedSequence a = random_sequence(rng, model.utility);
            const DatedSequence b = random_sequence(rng, model.utility);
            const ZeroSetCheck check = zero_set_interval_check(model, a, b, opt.sigma_max, opt.grid_points);
            ++instances;
            if (!check.contiguous) {
                violations.push_back(json{{"kind", "zero_set_gap"},
                                          {"seq_a", io::to_json(a)},
                                          {"seq_b", io::to_json(b)},
                                          {"gap",
                                           {{"zero_before", check.gap->zero_before},
                                            {"nonzero_between", check.gap->nonzero_between},
                                            {"zero_after", check.gap->zero_after}}}});
            }
        }
    }
    if (run_impatience) {
        const std::vector<double> t_samples{0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0};
        const std::vector<double> sigma_samples{0.25, 1.0, 5.0, 20.0};
        const Impatience closed = model.discount.classify_impatience().tag;
        const Impatience sampled = impatience_oracle(model.discount, t_samples, sigma_samples).tag;
        const Impatience shape =
            impatience_of_log_shape(log_concavity_oracle(model.discount, 0.0, 100.0).shape);
        ++instances;
        if (closed != sampled || closed != shape) {
            violations.push_back(json{{"kind", "impatience_disagreement"},
                                      {"closed_form", impatience_name(closed)},
                                      {"ratio_oracle", impatience_name(sampled)},
                                      {"log_shape_oracle", impatience_name(shape)}});
        }
    }
    if (run_weak) {
        const SuiteReport report = weak_one_switch_property_suite(model, opt.instances, opt.seed);
        instances += report.instances;
        max_residual = std::max(max_residual, report.max_residual);
        for (const Violation& v : report.violations) {
            json witness = io::to_json(v);
            witness["kind"] = "weak_one_switch_pattern";
            violations.push_back(std::move(witness));
        }
        if (report.propagation_checked && report.max_residual > 1e-10)
            violations.push_back(json{{"kind", "indifference_propagation"}, {"max_residual", report.max_residual}});
    }

    const bool found = !violations.empty();
    print(json{{"instances", instances},
               {"violations", violations},
               {"max_residual", max_residual},
               {"seed", opt.seed}});
    if (opt.expect_violation) return found ? 0 : 3;
    return found ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace oneswitch;

    CLI::App app{"One-switch discounted-utility toolkit"};
    app.require_subcommand(1);

    std::string model_path, seq_a_path, seq_b_path, out_path;

    auto* cmd_validate = app.add_subcommand("validate", "Validate a preference model file");
    cmd_validate->add_option("--model", model_path, "model JSON file")->required();

    auto* cmd_eval = app.add_subcommand("eval", "Discounted utility of a dated sequence");
    cmd_eval->add_option("--model", model_path)->required();
    cmd_eval->add_option("sequence", seq_a_path, "sequence JSON file")->required();

    std::vector<double> rate_times;
    auto* cmd_rate = app.add_subcommand("rate", "Time preference rate of the model's discount function");
    cmd_rate->add_option("--model", model_path)->required();
    cmd_rate->add_option("--t", rate_times, "evaluation times")->required();

    auto* cmd_classify = app.add_subcommand("classify", "Impatience classification of the discount function");
    cmd_classify->add_option("--model", model_path)->required();

    double sigma_max = kDefaultSigmaMax;
    int grid_points = kDefaultGridPoints;
    bool force_numeric = false, compare = false;
    auto* cmd_switch = app.add_subcommand("switch", "Locate the preference switch point of two sequences");
    cmd_switch->add_option("--model", model_path)->required();
    cmd_switch->add_option("seq_a", seq_a_path)->required();
    cmd_switch->add_option("seq_b", seq_b_path)->required();
    cmd_switch->add_option("--sigma-max", sigma_max, "scan upper bound");
    cmd_switch->add_option("--grid", grid_points, "scan grid points");
    cmd_switch->add_flag("--numeric", force_numeric, "force the numeric scan");
    cmd_switch->add_flag("--compare", compare, "run both methods and report the gap");

    double lambda = 0.5;
    auto* cmd_mix = app.add_subcommand("mix", "Mix two lottery sequences");
    cmd_mix->add_option("seq_a", seq_a_path)->required();
    cmd_mix->add_option("seq_b", seq_b_path)->required();
    cmd_mix->add_option("--lambda", lambda, "mixing weight in [0, 1]")->required();
    cmd_mix->add_option("--out", out_path, "output file (stdout when omitted)");

    VerifyOptions verify_opt;
    auto* cmd_verify = app.add_subcommand("verify", "Run verification suites against a model");
    cmd_verify->add_option("--model", verify_opt.model_path)->required();
    cmd_verify->add_option("--suite", verify_opt.suite, "one-switch | zero-set | impatience | weak-one-switch | all");
    cmd_verify->add_option("--seed", verify_opt.seed);
    cmd_verify->add_option("--budget", verify_opt.budget);
    cmd_verify->add_option("--instances", verify_opt.instances);
    cmd_verify->add_option("--sigma-max", verify_opt.sigma_max);
    cmd_verify->add_option("--grid", verify_opt.grid_points);
    cmd_verify->add_flag("--expect-violation", verify_opt.expect_violation,
                         "succeed only if a violation is found");

    std::uint64_t seed = 1, budget = 20000;
    auto* cmd_search = app.add_subcommand("search", "Randomized double-switch counterexample search");
    cmd_search->add_option("--model", model_path)->required();
    cmd_search->add_option("--seed", seed);
    cmd_search->add_option("--budget", budget);

    auto* cmd_plot = app.add_subcommand("plot-data", "Emit the bundled discount/rate comparison curves as CSV");
    cmd_plot->add_option("--out", out_path, "output CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_validate->parsed()) {
            const PreferenceModel model = load_model(model_path);
            print(json{{"valid", true}, {"model", io::to_json(model)}});
            return 0;
        }
        if (cmd_eval->parsed()) {
            const PreferenceModel model = load_model(model_path);
            const json seq = read_json_file(seq_a_path);
            const double value = seq.contains("lotteries")
                                     ? utility(model, io::lottery_sequence_from_json(seq))
                                     : utility(model, io::sequence_from_json(seq));
            print(json{{"utility", value}});
            return 0;
        }
        if (cmd_rate->parsed()) {
            const PreferenceModel model = load_model(model_path);
            json rates = json::array(), rate_derivs = json::array();
            for (double t : rate_times) {
                rates.push_back(model.discount.rate(t));
                rate_derivs.push_back(model.discount.rate_derivative(t));
            }
            print(json{{"t", rate_times}, {"rate", rates}, {"rate_derivative", rate_derivs}});
            return 0;
        }
        if (cmd_classify->parsed()) {
            const PreferenceModel model = load_model(model_path);
            print(io::to_json(model.discount.classify_impatience()));
            return 0;
        }
        if (cmd_switch->parsed()) {
            const PreferenceModel model = load_model(model_path);
            const DatedSequence a = io::sequence_from_json(read_json_file(seq_a_path));
            const DatedSequence b = io::sequence_from_json(read_json_file(seq_b_path));
            const bool has_closed_form = model.discount.as<Hyperbolic>() == nullptr;
            if (compare) {
                if (!has_closed_form)
                    throw DomainError(Errc::UnsupportedFamily,
                                      "--compare needs a closed-form family; hyperbolic has none");
                const SwitchAnalysis cf = switch_closed_form(model, a, b);
                const SwitchAnalysis nu = switch_numeric(model, a, b, sigma_max, grid_points);
                json out{{"closed_form", io::to_json(cf)}, {"numeric", io::to_json(nu)}};
                const auto s_cf = sigma_star(cf);
                const auto s_nu = sigma_star(nu);
                out["sigma_star_gap"] =
                    s_cf && s_nu ? json(std::abs(*s_cf - *s_nu)) : json(nullptr);
                print(out);
                return 0;
            }
            const SwitchAnalysis analysis = (force_numeric || !has_closed_form)
                                                ? switch_numeric(model, a, b, sigma_max, grid_points)
                                                : switch_closed_form(model, a, b);
            print(io::to_json(analysis));
            return 0;
        }
        if (cmd_mix->parsed()) {
            const LotterySequence a = io::lottery_sequence_from_json(read_json_file(seq_a_path));
            const LotterySequence b = io::lottery_sequence_from_json(read_json_file(seq_b_path));
            const json mixed = io::to_json(mix(a, lambda, b));
            if (out_path.empty()) {
                print(mixed);
            } else {
                std::ofstream out(out_path);
                if (!out) throw IoError{"cannot open " + out_path + " for writing"};
                out << mixed.dump(2) << "\n";
                if (!out) throw IoError{"write failed: " + out_path};
            }
            return 0;
        }
        if (cmd_verify->parsed()) {
            return run_verify(verify_opt);
        }
        if (cmd_search->parsed()) {
            const PreferenceModel model = load_model(model_path);
            const SearchResult result = double_switch_search(model, seed, budget);
            json out{{"found", result.violation.has_value()},
                     {"attempts", result.attempts},
                     {"seed", result.seed},
                     {"witness", result.violation ? io::to_json(*result.violation) : json(nullptr)}};
            print(out);
            return 0;
        }
        if (cmd_plot->parsed()) {
            std::ofstream out(out_path);
            if (!out) throw IoError{"cannot open " + out_path + " for writing"};
            write_plot_csv(out);
            out.flush();
            if (!out) throw IoError{"write failed: " + out_path};
            return 0;
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << " [" << errc_name(e.code()) << "]\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 1;
    }
    return 0;
}
