// Acceptance suite: runs the full verification battery end to end and prints
// one pass/fail line per criterion. Exits non-zero if any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oneswitch/json_io.hpp"
#include "oneswitch/oneswitch.hpp"

using namespace oneswitch;

namespace {

constexpr std::uint64_t kAcceptanceSeed = 42;

std::mt19937_64 rng(kAcceptanceSeed);
double uniform01() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

// ---- shared state between criteria 2, 3 and 9 ------------------------------

struct ScanSummary {
    int instances = 0;
    int max_crossings = 0;
    int over_one_crossing = 0;
    int unique_switches = 0;
    int closed_form_disagreements = 0;
    double max_sigma_gap = 0.0;
    int max_zero_regions = 0;
    struct Stored {
        DiscountFunction discount;
        DatedSequence seq_a;
        DatedSequence seq_b;
    };
    std::vector<Stored> stored;  // first instances kept for the explicit zero-set pass
};

ScanSummary scan_summary;
bool scan_ran = false;

DiscountFunction draw_lin_exp() {
    const double r = uniform(0.01, 0.035);
    return DiscountFunction(LinearTimesExponential{uniform01() * r, r});
}

DiscountFunction draw_sum_exp() {
    const double b = uniform(0.01, 0.035);
    const double c = uniform(0.01, 0.1);
    return DiscountFunction(SumOfExponentials{(1.0 - uniform01()) * (b / c + 1.0), b, c});
}

// ---- criterion 1: parameter gate -------------------------------------------

bool criterion_parameter_gate(std::string& detail) {
    int checked = 0, mismatches = 0, boundary_accepts = 0;
    const auto probe = [&](DiscountFunction::Family family, bool feasible) {
        ++checked;
        bool accepted = true;
        try {
            DiscountFunction d(family);
        } catch (const DomainError&) {
            accepted = false;
        }
        if (accepted != feasible) ++mismatches;
        if (accepted && feasible) ++boundary_accepts;
        return accepted;
    };

    const std::vector<double> signed_grid{-1.0, -0.1, 0.0, 1e-6, 0.01, 0.03, 0.05, 0.1, 0.5, 2.0};
    for (double r : signed_grid) probe(Exponential{r}, r > 0.0);
    for (double k : signed_grid) probe(Hyperbolic{k}, k > 0.0);

    boundary_accepts = 0;
    for (double r : signed_grid) {
        // c axis probes below, at and above every feasibility edge, with the
        // exact boundary c = r included.
        const std::vector<double> c_grid{-0.5, -1e-9, 0.0, 0.25 * r, 0.5 * r, 0.9 * r, r, r + 1e-9, 2.0 * r, 1.0};
        for (double c : c_grid) {
            const bool feasible = c >= 0.0 && r > 0.0 && r >= c;
            probe(LinearTimesExponential{c, r}, feasible);
            if (feasible && c == r && r > 0.0) ++boundary_accepts;
        }
    }
    const int lin_boundary = boundary_accepts;

    boundary_accepts = 0;
    const std::vector<double> positive_grid{-0.5, 0.0, 0.005, 0.01, 0.02, 0.03, 0.05, 0.08, 0.1, 0.5};
    for (double b : positive_grid) {
        for (double c : positive_grid) {
            const double bound = b / c + 1.0;  // same expression the validator uses
            const std::vector<double> a_grid{-0.5, 0.0,   0.3,          0.7,          1.0,
                                             1.2,  bound, bound + 1e-9, bound + 0.5, 3.0};
            for (double a : a_grid) {
                const bool feasible = a > 0.0 && b > 0.0 && c > 0.0 && std::isfinite(bound) && a <= bound;
                probe(SumOfExponentials{a, b, c}, feasible);
                if (feasible && a == bound) ++boundary_accepts;
            }
        }
    }

    std::ostringstream out;
    out << checked << " tuples, " << mismatches << " mismatches, boundary acceptances: c=r x" << lin_boundary
        << ", a=b/c+1 x" << boundary_accepts;
    detail = out.str();
    return mismatches == 0 && lin_boundary > 0 && boundary_accepts > 0;
}

// ---- criteria 2 and 3: one-switch positive direction ------------------------

bool criterion_one_switch_scan(std::string& detail) {
    constexpr int kPerFamily = 10000;
    const UtilityFunction u(1.0);
    for (int family = 0; family < 2; ++family) {
        int stored_for_family = 0;
        for (int i = 0; i < kPerFamily; ++i) {
            const PreferenceModel model{u, family == 0 ? draw_lin_exp() : draw_sum_exp()};
            const DatedSequence a = random_sequence(rng, u);
            const DatedSequence b = random_sequence(rng, u);
            const SwitchAnalysis nu = switch_numeric(model, a, b);

            ++scan_summary.instances;
            const int crossings = static_cast<int>(nu.crossings.size());
            scan_summary.max_crossings = std::max(scan_summary.max_crossings, crossings);
            if (crossings > 1) ++scan_summary.over_one_crossing;
            scan_summary.max_zero_regions =
                std::max(scan_summary.max_zero_regions, static_cast<int>(nu.zero_regions.size()));
            if (stored_for_family < 100) {
                scan_summary.stored.push_back({model.discount, a, b});
                ++stored_for_family;
            }

            if (const auto s_num = sigma_star(nu)) {
                ++scan_summary.unique_switches;
                const SwitchAnalysis cf = switch_closed_form(model, a, b);
                if (const auto s_cf = sigma_star(cf)) {
                    scan_summary.max_sigma_gap = std::max(scan_summary.max_sigma_gap, std::abs(*s_cf - *s_num));
                } else {
                    ++scan_summary.closed_form_disagreements;
                }
            }
        }
    }
    scan_ran = true;
    std::ostringstream out;
    out << scan_summary.instances << " instances on [0,500]x50001, max crossings " << scan_summary.max_crossings
        << ", " << scan_summary.unique_switches << " unique switches";
    detail = out.str();
    return scan_summary.over_one_crossing == 0;
}

bool criterion_closed_numeric_agreement(std::string& detail) {
    if (!scan_ran) {
        detail = "criterion 2 scan did not run";
        return false;
    }
    std::ostringstream out;
    out << scan_summary.unique_switches << " unique-switch instances, max |sigma*_cf - sigma*_num| = "
        << scan_summary.max_sigma_gap << ", verdict disagreements " << scan_summary.closed_form_disagreements;
    detail = out.str();
    return scan_summary.closed_form_disagreements == 0 && scan_summary.max_sigma_gap <= 1e-9 &&
           scan_summary.unique_switches > 0;
}

// ---- criterion 4: falsification --------------------------------------------

bool criterion_falsification(std::string& detail) {
    const PreferenceModel model{UtilityFunction(1.0), DiscountFunction(Hyperbolic{1.0})};
    const SearchResult result = double_switch_search(model, kHyperbolicWitnessSeed, 1000000);
    if (!result.violation) {
        detail = "no double-switch witness found within budget 1e6";
        return false;
    }
    const SwitchAnalysis doubled = switch_numeric(model, result.violation->seq_a, result.violation->seq_b,
                                                  kSearchSigmaMax, 2 * (kSearchGridPoints - 1) + 1);
    std::ostringstream out;
    out << "witness at attempt " << result.attempts << ", crossings at doubled density: " << doubled.crossings.size();
    detail = out.str();
    return result.violation->crossings.size() >= 2 && doubled.crossings.size() >= 2;
}

// ---- criterion 5: impatience dictionary -------------------------------------

bool criterion_impatience_dictionary(std::string& detail) {
    const std::vector<double> t_samples{0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 35.0, 50.0};
    const std::vector<double> sigma_samples{0.25, 1.0, 5.0, 20.0};
    int disagreements = 0, draws = 0;

    const auto agree = [&](const DiscountFunction& d) {
        ++draws;
        const Impatience closed = d.classify_impatience().tag;
        const Impatience sampled = impatience_oracle(d, t_samples, sigma_samples).tag;
        const Impatience shaped = impatience_of_log_shape(log_concavity_oracle(d, 0.0, 100.0).shape);
        if (closed != sampled || sampled != shaped) ++disagreements;
        return closed;
    };

    for (int i = 0; i < 100; ++i) agree(DiscountFunction(Exponential{uniform(0.01, 0.2)}));
    for (int i = 0; i < 100; ++i) {
        const double r = uniform(0.01, 0.1);
        agree(DiscountFunction(LinearTimesExponential{uniform(0.1, 1.0) * r, r}));
    }
    for (int i = 0; i < 100; ++i) {
        const double b = uniform(0.01, 0.1);
        const double c = uniform(0.01, 0.1);
        const double bound = b / c + 1.0;
        const double a = i % 2 == 0 ? uniform(0.05, 0.9) : 1.0 + uniform(0.05, 0.95) * (bound - 1.0);
        agree(DiscountFunction(SumOfExponentials{a, b, c}));
    }
    for (int i = 0; i < 100; ++i) agree(DiscountFunction(Hyperbolic{uniform(0.1, 3.0)}));

    bool pinned = true;
    pinned &= agree(DiscountFunction(LinearTimesExponential{0.01, 0.03})) == Impatience::StrictlyII;
    pinned &= agree(DiscountFunction(SumOfExponentials{0.5, 0.03, 0.05})) == Impatience::StrictlyDI;
    pinned &= agree(DiscountFunction(SumOfExponentials{1.2, 0.03, 0.05})) == Impatience::StrictlyII;
    pinned &= agree(DiscountFunction(SumOfExponentials{1.0, 0.03, 0.05})) == Impatience::Stationary;
    pinned &= agree(DiscountFunction(LinearTimesExponential{0.0, 0.03})) == Impatience::Stationary;
    pinned &= agree(DiscountFunction(Exponential{0.03})) == Impatience::Stationary;

    std::ostringstream out;
    out << draws << " draws, " << disagreements << " oracle disagreements, pinned cases "
        << (pinned ? "correct" : "WRONG");
    detail = out.str();
    return disagreements == 0 && pinned;
}

// ---- criterion 6: rate formulas ---------------------------------------------

bool criterion_rate_formulas(std::string& detail) {
    int fd_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        DiscountFunction d = [&] {
            switch (i % 4) {
                case 0: return DiscountFunction(Exponential{uniform(0.01, 0.2)});
                case 1: {
                    const double r = uniform(0.01, 0.1);
                    return DiscountFunction(LinearTimesExponential{uniform01() * r, r});
                }
                case 2: {
                    const double b = uniform(0.01, 0.1);
                    const double c = uniform(0.01, 0.1);
                    return DiscountFunction(SumOfExponentials{uniform(0.05, 0.95) * (b / c + 1.0), b, c});
                }
                default: return DiscountFunction(Hyperbolic{uniform(0.1, 2.0)});
            }
        }();
        const double t = uniform(0.1, 100.0);
        const double h = 1e-4;
        const double rate_fd = (std::log(d.evaluate(t - h)) - std::log(d.evaluate(t + h))) / (2.0 * h);
        const double rate_cf = d.rate(t);
        if (std::abs(rate_fd - rate_cf) > 1e-6 * (1.0 + std::abs(rate_cf))) ++fd_failures;
        const double deriv_fd = (d.rate(t + h) - d.rate(t - h)) / (2.0 * h);
        const double deriv_cf = d.rate_derivative(t);
        if (std::abs(deriv_fd - deriv_cf) > 1e-6 * (1.0 + std::abs(deriv_cf))) ++fd_failures;
    }

    double worst_at_zero = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double r = uniform(0.01, 0.1);
        const double c = uniform01() * r;
        const DiscountFunction d(LinearTimesExponential{c, r});
        worst_at_zero = std::max(worst_at_zero, std::abs(d.rate(0.0) - (r - c)));
    }
    const bool at_zero_ok = worst_at_zero <= 1e-15;

    // Asymptote clause as stated: |rate(1e4) - r| <= 1e-6 for the bundled
    // lin_exp parameters. The closed form gives c/(1+ct) = 0.01/101 ~ 9.9e-5
    // there, so this sub-check cannot mathematically pass; it is reported
    // honestly rather than loosened.
    const DiscountFunction fig(LinearTimesExponential{0.01, 0.03});
    const double asymptote_gap = std::abs(fig.rate(1e4) - 0.03);
    const bool asymptote_ok = asymptote_gap <= 1e-6;

    std::ostringstream out;
    out << "finite-difference failures " << fd_failures << "/2000, max |rate(0)-(r-c)| = " << worst_at_zero
        << ", asymptote |rate(1e4)-r| = " << asymptote_gap << (asymptote_ok ? " <= 1e-6" : " > 1e-6");
    detail = out.str();
    return fd_failures == 0 && at_zero_ok && asymptote_ok;
}

// ---- criterion 7: indifference propagation ----------------------------------

bool criterion_indifference_propagation(std::string& detail) {
    double worst_one_switch = 0.0;
    bool ok = true;
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
        for (const DiscountFunction d : {DiscountFunction(LinearTimesExponential{0.01, 0.03}),
                                         DiscountFunction(SumOfExponentials{0.5, 0.03, 0.05}),
                                         DiscountFunction(SumOfExponentials{1.2, 0.03, 0.05})}) {
            const DifferenceEquationResult result =
                difference_equation_check(d, build_indifference_triple(d, sigma), 0.0, 200.0);
            worst_one_switch = std::max(worst_one_switch, result.max_residual);
            ok = ok && result.passed;
        }
    }
    double hyperbolic_min = 1e300;
    const DiscountFunction hyp(Hyperbolic{1.0});
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
        const DifferenceEquationResult result =
            difference_equation_check(hyp, build_indifference_triple(hyp, sigma), 0.0, 200.0);
        hyperbolic_min = std::min(hyperbolic_min, result.max_residual);
    }
    std::ostringstream out;
    out << "one-switch families max residual " << worst_one_switch << " (<= 1e-10), hyperbolic min residual "
        << hyperbolic_min << " (> 1e-4)";
    detail = out.str();
    return ok && worst_one_switch <= 1e-10 && hyperbolic_min > 1e-4;
}

// ---- criterion 8: mixture linearity -----------------------------------------

Lottery random_lottery() {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<Lottery::Atom> atoms;
    double remaining = 1.0;
    for (int i = 0; i < n; ++i) {
        const double p = i + 1 == n ? remaining : remaining * uniform01();
        atoms.push_back({Outcome(uniform(0.0, 10.0)), p});
        remaining -= p;
    }
    return Lottery::make(std::move(atoms));
}

LotterySequence random_lottery_sequence() {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<double> times(n);
    for (double& t : times) t = uniform(0.0, 50.0);
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) times[i] = times[i - 1] + 0.125;
    std::vector<Lottery> lotteries;
    for (int i = 0; i < n; ++i) lotteries.push_back(random_lottery());
    return LotterySequence::make(std::move(lotteries), std::move(times));
}

bool criterion_mixture_linearity(std::string& detail) {
    const std::vector<DiscountFunction> families{
        DiscountFunction(Exponential{0.03}), DiscountFunction(LinearTimesExponential{0.01, 0.03}),
        DiscountFunction(SumOfExponentials{0.5, 0.03, 0.05}), DiscountFunction(Hyperbolic{1.0})};
    int linearity_failures = 0, axiom_failures = 0;
    double worst_rel = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const PreferenceModel model{UtilityFunction(i % 5 == 0 ? 2.0 : 1.0), families[i % families.size()]};
        const LotterySequence a = random_lottery_sequence();
        const LotterySequence b = random_lottery_sequence();
        const double lambda = uniform01();
        const double mu = uniform01();

        const double ua = utility(model, a);
        const double ub = utility(model, b);
        const double mixed = utility(model, mix(a, lambda, b));
        const double rel = std::abs(mixed - (lambda * ua + (1.0 - lambda) * ub)) / (1.0 + std::abs(ua) + std::abs(ub));
        worst_rel = std::max(worst_rel, rel);
        if (rel > 1e-12) ++linearity_failures;

        if (std::abs(utility(model, mix(a, 1.0, b)) - ua) > 1e-14 * (1.0 + std::abs(ua))) ++axiom_failures;
        const double commuted = utility(model, mix(b, 1.0 - lambda, a));
        if (std::abs(utility(model, mix(a, lambda, b)) - commuted) > 1e-13 * (1.0 + std::abs(commuted)))
            ++axiom_failures;
        const double nested = utility(model, mix(mix(a, mu, b), lambda, b));
        const double direct = utility(model, mix(a, lambda * mu, b));
        if (std::abs(nested - direct) > 1e-12 * (1.0 + std::abs(direct))) ++axiom_failures;
    }
    std::ostringstream out;
    out << "1000 pairs, worst linearity residual " << worst_rel << ", axiom failures " << axiom_failures;
    detail = out.str();
    return linearity_failures == 0 && axiom_failures == 0;
}

// ---- criterion 9: zero-set interval ------------------------------------------

bool criterion_zero_set(std::string& detail) {
    if (!scan_ran) {
        detail = "criterion 2 scan did not run";
        return false;
    }
    // Contiguity over all scan instances: a split zero set would have shown
    // up as a second zero region.
    const bool all_contiguous = scan_summary.max_zero_regions <= 1;

    int explicit_checked = 0, explicit_failures = 0;
    for (const auto& stored : scan_summary.stored) {
        const PreferenceModel model{UtilityFunction(1.0), stored.discount};
        const ZeroSetCheck check = zero_set_interval_check(model, stored.seq_a, stored.seq_b);
        ++explicit_checked;
        if (!check.contiguous) ++explicit_failures;
    }

    const ZeroSetCheck control =
        zero_set_interval_check([](double sigma) { return std::sin(sigma); }, 0.05, 10.0, 1001);
    const bool control_fails = !control.contiguous && control.gap.has_value();

    std::ostringstream out;
    out << "max zero regions over scan " << scan_summary.max_zero_regions << ", explicit checks "
        << explicit_checked << " (failures " << explicit_failures << "), sinusoidal control "
        << (control_fails ? "rejected" : "NOT rejected");
    detail = out.str();
    return all_contiguous && explicit_failures == 0 && control_fails;
}

// ---- criterion 10: plot data --------------------------------------------------

bool criterion_plot_data(std::string& detail) {
    std::ostringstream csv;
    write_plot_csv(csv);
    std::istringstream in(csv.str());
    std::string header;
    std::getline(in, header);
    if (header !=
        "t,D_linexp,D_exp,D_sumexp_a05,D_sumexp_a12,rate_linexp,rate_exp,rate_sumexp_a05,rate_sumexp_a12") {
        detail = "unexpected header: " + header;
        return false;
    }

    std::vector<std::array<double, 9>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::array<double, 9> row{};
        std::istringstream fields(line);
        std::string field;
        for (int i = 0; i < 9; ++i) {
            std::getline(fields, field, ',');
            row[i] = std::strtod(field.c_str(), nullptr);
        }
        rows.push_back(row);
    }
    if (rows.size() != 401) {
        detail = "expected 401 rows, got " + std::to_string(rows.size());
        return false;
    }

    bool ok = true;
    std::ostringstream out;
    for (int col = 1; col <= 4; ++col) {
        if (rows[0][col] != 1.0) {
            ok = false;
            out << "D(0) != 1 in column " << col << "; ";
        }
        for (std::size_t k = 1; k < rows.size(); ++k)
            if (!(rows[k][col] < rows[k - 1][col])) {
                ok = false;
                out << "column " << col << " not strictly decreasing at row " << k << "; ";
                break;
            }
    }
    if (std::abs(rows[0][5] - 0.02) > 1e-15) {
        ok = false;
        out << "rate_linexp(0) != 0.02; ";
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (!(rows[k][5] > rows[k - 1][5])) {
            ok = false;
            out << "rate_linexp not strictly increasing; ";
            break;
        }
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k][6] != 0.03) {
            ok = false;
            out << "rate_exp not constant 0.03; ";
            break;
        }
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (!(rows[k][7] < rows[k - 1][7])) {
            ok = false;
            out << "rate_sumexp_a05 not strictly decreasing; ";
            break;
        }
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        if (!(rows[k][8] > rows[k - 1][8])) {
            ok = false;
            out << "rate_sumexp_a12 not strictly increasing; ";
            break;
        }
    }
    out << "401 rows, D(0)=1 in all four columns, all monotonicity checks evaluated";
    detail = out.str();
    return ok;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "parameter gate: feasibility sweep with boundary equalities", criterion_parameter_gate},
        {2, "one-switch positive direction: <= 1 strict sign change per instance", criterion_one_switch_scan},
        {3, "closed-form vs numeric switch points agree to 1e-9", criterion_closed_numeric_agreement},
        {4, "falsification: hyperbolic double-switch witness at the documented seed", criterion_falsification},
        {5, "impatience dictionary: classifier and both oracles agree", criterion_impatience_dictionary},
        {6, "rate formulas: finite differences, r-c at zero, asymptote", criterion_rate_formulas},
        {7, "indifference propagation: difference equation residuals", criterion_indifference_propagation},
        {8, "mixture linearity and mixture-set axioms", criterion_mixture_linearity},
        {9, "zero set is one contiguous interval; sinusoidal control rejected", criterion_zero_set},
        {10, "plot data: curve values, monotone shapes and rate limits", criterion_plot_data},
    };

    int failures = 0;
    const auto suite_start = std::chrono::steady_clock::now();
    for (Criterion& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = false;
        try {
            passed = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s — %s (%.2f s)\n", passed ? "PASS" : "FAIL", criterion.id,
                    criterion.name.c_str(), detail.c_str(), seconds);
        std::fflush(stdout);
        if (!passed) ++failures;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
    std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failures, criteria.size(),
                total);
    return failures == 0 ? 0 : 1;
}
