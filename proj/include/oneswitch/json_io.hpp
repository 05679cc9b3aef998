#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "oneswitch/core.hpp"
#include "oneswitch/discount.hpp"
#include "oneswitch/du.hpp"
#include "oneswitch/errors.hpp"
#include "oneswitch/verify.hpp"

namespace oneswitch::io {

using nlohmann::json;

// ---- discount functions ----------------------------------------------------
//
// Discriminated union:
//   {"exponential":{"r":...}} | {"lin_exp":{"c":...,"r":...}} |
//   {"sum_exp":{"a":...,"b":...,"c":...}} | {"hyperbolic":{"k":...}}
//
// lin_exp and sum_exp also accept the raw parameterizations
//   {"lin_exp":{"c1":...,"c2":...,"r1":...}}
//   {"sum_exp":{"c1":...,"c2":...,"r1":...,"r2":...}}
// which are converted to the normalized forms; a raw tuple outside the
// feasible set is rejected as a parameter error.

namespace detail {

inline LinearTimesExponential lin_exp_from_raw(const json& j) {
    const double c1 = j.at("c1").get<double>();
    const double c2 = j.at("c2").get<double>();
    const double r1 = j.at("r1").get<double>();
    if (std::abs(c1 - 1.0) > 1e-12)
        throw DomainError(Errc::ParamOutOfRange, "lin_exp raw form requires c1 = 1");
    if (!(r1 < 0.0)) throw DomainError(Errc::ParamOutOfRange, "lin_exp raw form requires r1 < 0");
    if (!(c2 >= 0.0)) throw DomainError(Errc::ParamOutOfRange, "lin_exp raw form requires c2 >= 0");
    if (!(-r1 >= c2)) throw DomainError(Errc::ParamOutOfRange, "lin_exp raw form requires -r1 >= c2");
    return LinearTimesExponential{c2, -r1};
}

inline SumOfExponentials sum_exp_from_raw(const json& j) {
    const double c1 = j.at("c1").get<double>();
    const double c2 = j.at("c2").get<double>();
    const double r1 = j.at("r1").get<double>();
    const double r2 = j.at("r2").get<double>();
    if (std::abs(c1 + c2 - 1.0) > 1e-12)
        throw DomainError(Errc::ParamOutOfRange, "sum_exp raw form requires c1 + c2 = 1");
    if (r1 == r2) throw DomainError(Errc::ParamOutOfRange, "sum_exp raw form requires r1 != r2");
    if (r1 < r2) {
        if (!(r2 < 0.0)) throw DomainError(Errc::ParamOutOfRange, "sum_exp raw form requires r1 < r2 < 0");
        const double lo = r2 / (r2 - r1);
        if (!(c1 >= lo && c1 < 1.0))
            throw DomainError(Errc::ParamOutOfRange, "sum_exp raw form requires r2/(r2-r1) <= c1 < 1");
        return SumOfExponentials{c2, -r2, r2 - r1};
    }
    if (!(r1 < 0.0)) throw DomainError(Errc::ParamOutOfRange, "sum_exp raw form requires r2 < r1 < 0");
    const double hi = r2 / (r2 - r1);
    if (!(c1 > 0.0 && c1 <= hi))
        throw DomainError(Errc::ParamOutOfRange, "sum_exp raw form requires 0 < c1 <= r2/(r2-r1)");
    return SumOfExponentials{c1, -r1, r1 - r2};
}

}  // namespace detail

inline DiscountFunction discount_from_json(const json& j) {
    if (!j.is_object() || j.size() != 1)
        throw DomainError(Errc::ParamOutOfRange, "discount must be a single-key family object");
    if (j.contains("exponential")) {
        return DiscountFunction(Exponential{j.at("exponential").at("r").get<double>()});
    }
    if (j.contains("lin_exp")) {
        const json& p = j.at("lin_exp");
        if (p.contains("c1") || p.contains("c2") || p.contains("r1"))
            return DiscountFunction(detail::lin_exp_from_raw(p));
        return DiscountFunction(LinearTimesExponential{p.at("c").get<double>(), p.at("r").get<double>()});
    }
    if (j.contains("sum_exp")) {
        const json& p = j.at("sum_exp");
        if (p.contains("c1") || p.contains("c2") || p.contains("r1") || p.contains("r2"))
            return DiscountFunction(detail::sum_exp_from_raw(p));
        return DiscountFunction(
            SumOfExponentials{p.at("a").get<double>(), p.at("b").get<double>(), p.at("c").get<double>()});
    }
    if (j.contains("hyperbolic")) {
        return DiscountFunction(Hyperbolic{j.at("hyperbolic").at("k").get<double>()});
    }
    throw DomainError(Errc::UnsupportedFamily,
                      "unknown discount family; expected exponential, lin_exp, sum_exp or hyperbolic");
}

inline json to_json(const DiscountFunction& discount) {
    json j;
    if (const auto* f = discount.as<Exponential>()) {
        j["exponential"] = {{"r", f->r}};
    } else if (const auto* f = discount.as<LinearTimesExponential>()) {
        j["lin_exp"] = {{"c", f->c}, {"r", f->r}};
    } else if (const auto* f = discount.as<SumOfExponentials>()) {
        j["sum_exp"] = {{"a", f->a}, {"b", f->b}, {"c", f->c}};
    } else if (const auto* f = discount.as<Hyperbolic>()) {
        j["hyperbolic"] = {{"k", f->k}};
    }
    return j;
}

// ---- utility / model -------------------------------------------------------

inline UtilityFunction utility_from_json(const json& j) {
    return UtilityFunction(j.at("power").get<double>());
}

inline json to_json(const UtilityFunction& utility) { return json{{"power", utility.gamma()}}; }

inline PreferenceModel model_from_json(const json& j) {
    return PreferenceModel{utility_from_json(j.at("utility")), discount_from_json(j.at("discount"))};
}

inline json to_json(const PreferenceModel& model) {
    return json{{"utility", to_json(model.utility)}, {"discount", to_json(model.discount)}};
}

// ---- sequences and lotteries -----------------------------------------------

inline DatedSequence sequence_from_json(const json& j) {
    if (j.contains("lotteries"))
        throw DomainError(Errc::NotALottery,
                          "lottery sequence supplied where a scalar dated sequence is required");
    std::vector<Outcome> outcomes;
    for (const json& v : j.at("outcomes")) outcomes.emplace_back(v.get<double>());
    return DatedSequence::make(std::move(outcomes), j.at("times").get<std::vector<double>>());
}

inline json to_json(const DatedSequence& seq) {
    json outcomes = json::array();
    for (const Outcome& x : seq.outcomes()) outcomes.push_back(x.value());
    return json{{"outcomes", std::move(outcomes)}, {"times", seq.times()}};
}

inline Lottery lottery_from_json(const json& j) {
    std::vector<Lottery::Atom> atoms;
    for (const json& entry : j.at("support"))
        atoms.push_back({Outcome(entry.at("x").get<double>()), entry.at("p").get<double>()});
    return Lottery::make(std::move(atoms));
}

inline json to_json(const Lottery& lottery) {
    json support = json::array();
    for (const Lottery::Atom& atom : lottery.support())
        support.push_back(json{{"x", atom.outcome.value()}, {"p", atom.probability}});
    return json{{"support", std::move(support)}};
}

inline LotterySequence lottery_sequence_from_json(const json& j) {
    if (j.contains("outcomes"))
        throw DomainError(Errc::NotALottery,
                          "scalar sequence supplied where a lottery sequence is required; promote it explicitly");
    std::vector<Lottery> lotteries;
    for (const json& entry : j.at("lotteries")) lotteries.push_back(lottery_from_json(entry));
    return LotterySequence::make(std::move(lotteries), j.at("times").get<std::vector<double>>());
}

inline json to_json(const LotterySequence& seq) {
    json lotteries = json::array();
    for (const Lottery& lottery : seq.outcomes()) lotteries.push_back(to_json(lottery));
    return json{{"lotteries", std::move(lotteries)}, {"times", seq.times()}};
}

// ---- switch analysis -------------------------------------------------------

inline json to_json(const SwitchAnalysis& analysis) {
    json j;
    j["verdict"] = verdict_name(analysis.verdict);
    if (const auto* u = std::get_if<UniqueSwitch>(&analysis.verdict)) {
        j["sigma_star"] = u->sigma_star;
        j["direction"] = direction_name(u->direction);
    } else {
        j["sigma_star"] = nullptr;
    }
    json crossings = json::array();
    for (const Crossing& c : analysis.crossings) crossings.push_back(c.sigma);
    j["crossings"] = std::move(crossings);
    j["method"] = method_name(analysis.method);
    if (analysis.coefficients) {
        if (const auto* le = std::get_if<LinExpCoefficients>(&*analysis.coefficients))
            j["coefficients"] = json{{"A", le->A}, {"B", le->B}};
        else if (const auto* se = std::get_if<SumExpCoefficients>(&*analysis.coefficients))
            j["coefficients"] = json{{"A_tilde", se->A_tilde}, {"B_tilde", se->B_tilde}};
    } else {
        j["coefficients"] = nullptr;
    }
    return j;
}

// ---- verification reports --------------------------------------------------

inline json to_json(const Violation& violation) {
    return json{{"seq_a", to_json(violation.seq_a)},
                {"seq_b", to_json(violation.seq_b)},
                {"crossings", violation.crossings}};
}

inline json to_json(const ImpatienceClass& cls) {
    json j;
    j["class"] = impatience_name(cls.tag);
    if (const auto* rule = std::get_if<ClosedFormRule>(&cls.evidence)) {
        j["evidence"] = json{{"closed_form_rule", rule->rule}};
    } else if (const auto* w = std::get_if<NumericWitness>(&cls.evidence)) {
        j["evidence"] = json{{"numeric_witness", {{"t", w->t}, {"s", w->s}, {"sigma", w->sigma}}}};
    }
    return j;
}

/// Report schema shared by the verification suites:
/// {"instances":N,"violations":[...],"max_residual":...,"seed":...}
inline json make_report(int instances, const std::vector<Violation>& violations, double max_residual,
                        std::uint64_t seed) {
    json list = json::array();
    for (const Violation& v : violations) list.push_back(to_json(v));
    return json{{"instances", instances},
                {"violations", std::move(list)},
                {"max_residual", max_residual},
                {"seed", seed}};
}

}  // namespace oneswitch::io
