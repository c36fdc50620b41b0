//---------------------------------------------------------------------------//
// Copyright 2026 The drbaseline Authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file scenario.cpp
//---------------------------------------------------------------------------//
#include "drb/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "drb/errors.hpp"
#include "drb/mechanism.hpp"

namespace drb
{
namespace
{
namespace pt = boost::property_tree;

std::string exact(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join(std::vector<std::string> const& items, char const* sep)
{
    std::string out;
    for (auto const& item : items)
        out += (out.empty() ? "" : sep) + item;
    return out;
}

//---------------------------------------------------------------------------//
/*!
 * Typed reads from one section, recording every resolved value (defaults
 * included) and rejecting keys the section does not define.
 */
class SectionReader
{
  public:
    SectionReader(pt::ptree const* tree,
                  std::string section,
                  std::set<std::string> allowed,
                  std::map<std::string, std::string>& resolved)
        : tree_(tree)
        , section_(std::move(section))
        , resolved_(resolved)
    {
        if (!tree_)
            return;
        for (auto const& [key, child] : *tree_)
        {
            if (!child.empty())
                continue;
            if (!allowed.count(key))
            {
                throw ValidationError("unknown key '" + key + "' in section ["
                                      + section_ + "]");
            }
        }
    }

    bool present() const { return tree_ != nullptr; }

    bool has(std::string const& key) const
    {
        return tree_ && tree_->get_child_optional(key).has_value();
    }

    std::string raw(std::string const& key) const
    {
        return boost::trim_copy(tree_->get<std::string>(key));
    }

    std::string text(std::string const& key, std::string const& fallback)
    {
        auto const value = has(key) ? raw(key) : fallback;
        record(key, value);
        return value;
    }

    double number(std::string const& key, double fallback)
    {
        double const value = has(key) ? parse_number(key, raw(key)) : fallback;
        record(key, exact(value));
        return value;
    }

    double required_number(std::string const& key)
    {
        if (!has(key))
        {
            throw ValidationError("missing key '" + key + "' in section ["
                                  + section_ + "]");
        }
        return number(key, 0);
    }

    std::size_t count(std::string const& key, std::size_t fallback)
    {
        if (!has(key))
        {
            record(key, std::to_string(fallback));
            return fallback;
        }
        double const value = parse_number(key, raw(key));
        if (value < 0 || value != std::floor(value))
            fail(key, "expected a nonnegative integer");
        record(key, std::to_string(static_cast<std::size_t>(value)));
        return static_cast<std::size_t>(value);
    }

    std::uint64_t u64(std::string const& key, std::uint64_t fallback)
    {
        std::uint64_t value = fallback;
        if (has(key))
        {
            try
            {
                std::size_t used = 0;
                value = std::stoull(raw(key), &used);
                if (used != raw(key).size())
                    fail(key, "expected an unsigned integer");
            }
            catch (std::logic_error const&)
            {
                fail(key, "expected an unsigned integer");
            }
        }
        record(key, std::to_string(value));
        return value;
    }

    bool flag(std::string const& key, bool fallback)
    {
        bool value = fallback;
        if (has(key))
        {
            auto const v = boost::to_lower_copy(raw(key));
            if (v == "true" || v == "1" || v == "on" || v == "yes")
                value = true;
            else if (v == "false" || v == "0" || v == "off" || v == "no")
                value = false;
            else
                fail(key, "expected true or false");
        }
        record(key, value ? "true" : "false");
        return value;
    }

    std::vector<double> list(std::string const& key,
                             std::vector<double> const& fallback)
    {
        std::vector<double> values = fallback;
        if (has(key))
        {
            values.clear();
            std::vector<std::string> parts;
            auto const text = raw(key);
            boost::split(parts, text, boost::is_any_of(","));
            for (auto& part : parts)
            {
                boost::trim(part);
                if (!part.empty())
                    values.push_back(parse_number(key, part));
            }
        }
        std::vector<std::string> shown;
        for (double v : values)
            shown.push_back(exact(v));
        record(key, join(shown, ","));
        return values;
    }

    //! "start:stop:step" or a comma list.
    std::vector<double> grid(std::string const& key,
                             std::vector<double> const& fallback)
    {
        if (!has(key) || raw(key).find(':') == std::string::npos)
            return list(key, fallback);
        std::vector<std::string> parts;
        auto const text = raw(key);
        boost::split(parts, text, boost::is_any_of(":"));
        if (parts.size() != 3)
            fail(key, "expected start:stop:step");
        double const start = parse_number(key, boost::trim_copy(parts[0]));
        double const stop = parse_number(key, boost::trim_copy(parts[1]));
        double const step = parse_number(key, boost::trim_copy(parts[2]));
        if (!(step > 0) || stop < start)
            fail(key, "grid needs step > 0 and stop >= start");
        auto const n = static_cast<std::size_t>(
            std::floor((stop - start) / step + 1e-9)) + 1;
        std::vector<double> values;
        for (std::size_t i = 0; i < n; ++i)
            values.push_back(start + static_cast<double>(i) * step);
        record(key, exact(start) + ":" + exact(stop) + ":" + exact(step));
        return values;
    }

    [[noreturn]] void fail(std::string const& key, std::string const& why) const
    {
        throw ValidationError("[" + section_ + "] " + key + ": " + why);
    }

  private:
    double parse_number(std::string const& key, std::string const& text) const
    {
        try
        {
            std::size_t used = 0;
            double const value = std::stod(text, &used);
            if (used != text.size() || !std::isfinite(value))
                fail(key, "expected a finite number, got '" + text + "'");
            return value;
        }
        catch (std::logic_error const&)
        {
            fail(key, "expected a number, got '" + text + "'");
        }
    }

    void record(std::string const& key, std::string const& value)
    {
        resolved_[(section_.empty() ? "" : section_ + ".") + key] = value;
    }

    pt::ptree const* tree_;
    std::string section_;
    std::map<std::string, std::string>& resolved_;
};

pt::ptree const* find_section(pt::ptree const& root, std::string const& name)
{
    auto child = root.get_child_optional(name);
    if (!child || child->empty())
        return nullptr;
    return &child.get();
}

void throw_if(std::vector<std::string> const& errors)
{
    if (!errors.empty())
        throw ValidationError(join(errors, "; "));
}

std::string canonical(std::map<std::string, std::string> const& resolved)
{
    std::string text;
    for (auto const& [key, value] : resolved)
        text += key + "=" + value + "\n";
    return text;
}
}  // namespace

//---------------------------------------------------------------------------//
std::string to_string(Experiment e)
{
    switch (e)
    {
        case Experiment::table2:
            return "table2";
        case Experiment::fig3:
            return "fig3";
        case Experiment::compare:
            return "compare";
        case Experiment::event:
            return "event";
        case Experiment::validate:
            return "validate";
    }
    return "unknown";
}

ConsumerParams Scenario::consumer(double d) const
{
    ConsumerParams params;
    params.c = c;
    params.d = d;
    params.theta_dist = theta;
    return params;
}

MechanismParams Scenario::mechanism(double pi2_value) const
{
    MechanismParams mech;
    mech.pi0 = pi0;
    mech.pi2 = pi2_value;
    mech.p = p;
    mech.penalty = penalty;
    return mech;
}

std::string sha256_hex(std::string const& text)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < length; ++i)
    {
        std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

Scenario load_scenario(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path);
}

Scenario parse_scenario(std::string const& text, std::string const& origin)
{
    pt::ptree root;
    try
    {
        std::istringstream in(text);
        pt::read_ini(in, root);
    }
    catch (pt::ini_parser_error const& e)
    {
        throw ValidationError(origin + ":" + std::to_string(e.line())
                              + ": parse error: " + e.message());
    }

    static std::set<std::string> const sections{"consumer",
                                                "theta",
                                                "mechanism",
                                                "market",
                                                "sampling",
                                                "horizon",
                                                "output"};
    for (auto const& [key, child] : root)
    {
        if (!child.empty() && !sections.count(key))
            throw ValidationError("unknown section [" + key + "]");
    }

    Scenario s;
    auto& resolved = s.resolved;

    SectionReader top(&root, "", {"name", "units"}, resolved);
    s.name = top.text("name", "unnamed");
    s.units = top.text("units", "kWh-scale");
    if (s.units != "kWh-scale" && s.units != "MWh-scale")
        top.fail("units", "expected kWh-scale or MWh-scale");

    SectionReader consumer(find_section(root, "consumer"),
                           "consumer",
                           {"c", "d", "count", "population_d", "report"},
                           resolved);
    if (!consumer.present())
        throw ValidationError("section [consumer] required");
    s.c = consumer.required_number("c");
    s.d_values = consumer.list("d", {});
    s.count = consumer.count("count", 100);
    s.population_d = consumer.list("population_d", {});
    auto const report = consumer.text("report", "optimal");
    if (report == "optimal")
        s.report = ReportPolicy::optimal;
    else if (report == "truthful")
        s.report = ReportPolicy::truthful;
    else
        consumer.fail("report", "expected optimal or truthful");
    if (s.d_values.empty() && s.population_d.empty())
        consumer.fail("d", "at least one d value required");

    SectionReader theta(find_section(root, "theta"),
                        "theta",
                        {"kind", "value", "lo", "hi", "location", "scale"},
                        resolved);
    auto const kind = theta.text("kind", "uniform");
    if (kind == "degenerate")
    {
        s.theta = ThetaDist::degenerate_at(theta.number("value", 0));
    }
    else if (kind == "uniform")
    {
        double const lo = theta.number("lo", -0.05);
        double const hi = theta.number("hi", 0.05);
        s.theta = ThetaDist::uniform_on(lo, hi);
    }
    else if (kind == "truncated-normal")
    {
        double const loc = theta.number("location", 0);
        double const sd = theta.number("scale", 0.025);
        double const lo = theta.number("lo", -0.05);
        double const hi = theta.number("hi", 0.05);
        s.theta = ThetaDist::truncated_normal(loc, sd, lo, hi);
    }
    else
    {
        theta.fail("kind", "expected degenerate, uniform or truncated-normal");
    }

    SectionReader mech(find_section(root, "mechanism"),
                       "mechanism",
                       {"pi0",
                        "pi2",
                        "p",
                        "lambda",
                        "epsilon",
                        "pi_rec",
                        "p_grid",
                        "delta_q_star",
                        "events"},
                       resolved);
    if (!mech.present())
        throw ValidationError("section [mechanism] required");
    s.pi0 = mech.required_number("pi0");
    if (mech.has("pi2") && mech.raw("pi2") == "derive-from-market")
        mech.text("pi2", "derive-from-market");
    else
        s.pi2 = mech.required_number("pi2");
    s.p_requested = mech.required_number("p");
    s.penalty.lambda = mech.number("lambda", 0.1);
    s.penalty.epsilon = mech.number("epsilon", 0);
    s.pi_rec = mech.list("pi_rec", {0});
    s.p_grid = mech.grid("p_grid", {});
    if (mech.has("delta_q_star") && mech.raw("delta_q_star") == "foc")
        mech.text("delta_q_star", "foc");
    else if (mech.has("delta_q_star"))
        s.delta_q_star = mech.number("delta_q_star", 0);
    else
        mech.text("delta_q_star", "foc");
    s.events = mech.count("events", 1);

    if (s.p_requested > 0 && s.p_requested <= 1)
    {
        auto const admissible = admissible_probability(s.p_requested);
        s.p = admissible.p;
        if (admissible.rounded)
        {
            std::ostringstream os;
            os.precision(12);
            os << "p = " << s.p_requested << " rounded to 1/"
               << admissible.n_groups << " = " << s.p
               << " so that groups partition the recruits";
            s.warnings.push_back(os.str());
        }
    }
    else
    {
        s.p = s.p_requested;
    }
    resolved["mechanism.p_effective"] = exact(s.p);

    SectionReader market(find_section(root, "market"),
                         "market",
                         {"a", "b", "q_lo", "q_hi", "q0"},
                         resolved);
    if (market.present())
    {
        MarketModel m;
        m.a = market.required_number("a");
        m.b = market.required_number("b");
        m.q_lo = market.required_number("q_lo");
        m.q_hi = market.required_number("q_hi");
        m.q0 = market.required_number("q0");
        s.market = m;
    }

    SectionReader sampling(find_section(root, "sampling"),
                           "sampling",
                           {"method", "n", "seed", "mc_samples"},
                           resolved);
    auto const method = sampling.text("method", "quadrature");
    if (method == "quadrature")
        s.sampling.method = ThetaSamplePlan::Method::quadrature;
    else if (method == "monte-carlo")
        s.sampling.method = ThetaSamplePlan::Method::monte_carlo;
    else
        sampling.fail("method", "expected quadrature or monte-carlo");
    s.sampling.n_points = sampling.count("n", 16);
    s.sampling.seed = sampling.u64("seed", 42);
    s.mc_samples = sampling.count("mc_samples", 100000);
    if (s.sampling.n_points == 0)
        sampling.fail("n", "must be positive");

    SectionReader horizon(find_section(root, "horizon"),
                          "horizon",
                          {"days",
                           "events",
                           "event_days",
                           "m",
                           "numerator_inflation",
                           "denominator_deflation",
                           "replications"},
                          resolved);
    if (horizon.present())
    {
        HorizonSpec h;
        h.days = horizon.count("days", h.days);
        h.events = horizon.count("events", h.events);
        for (double day : horizon.list("event_days", {}))
        {
            if (day < 0 || day != std::floor(day))
                horizon.fail("event_days", "expected nonnegative integers");
            h.event_days.push_back(static_cast<std::size_t>(day));
        }
        h.m = horizon.count("m", h.m);
        h.numerator_inflation
            = horizon.flag("numerator_inflation", h.numerator_inflation);
        h.denominator_deflation
            = horizon.flag("denominator_deflation", h.denominator_deflation);
        h.replications = horizon.count("replications", h.replications);
        if (h.replications == 0)
            horizon.fail("replications", "must be positive");
        s.horizon = h;
    }

    SectionReader output(
        find_section(root, "output"), "output", {"dir"}, resolved);
    s.out_dir = output.text("dir", "out");

    // Model-level validation
    std::vector<std::string> errors;
    auto d_all = s.d_values;
    d_all.insert(d_all.end(), s.population_d.begin(), s.population_d.end());
    for (double d : d_all)
    {
        auto e = validate(s.consumer(d));
        errors.insert(errors.end(), e.begin(), e.end());
    }
    if (!(s.pi0 > 0))
        errors.push_back("mechanism: pi0 must be positive");
    if (s.pi2 && !(*s.pi2 >= 0))
        errors.push_back("mechanism: pi2 must be nonnegative");
    if (!(s.p >= 0 && s.p < 1))
        errors.push_back("mechanism: p must lie in [0, 1)");
    auto penalty_errors = validate(s.penalty);
    errors.insert(errors.end(), penalty_errors.begin(), penalty_errors.end());
    for (double r : s.pi_rec)
    {
        if (r < 0)
            errors.push_back("mechanism: pi_rec must be nonnegative");
    }
    for (double p : s.p_grid)
    {
        if (!(p > 0 && p < 1))
            errors.push_back("mechanism: p_grid must lie in (0, 1)");
    }
    if (s.delta_q_star && !(*s.delta_q_star > 0))
        errors.push_back("mechanism: delta_q_star must be positive");
    if (s.market)
    {
        auto e = validate_market(*s.market);
        errors.insert(errors.end(), e.begin(), e.end());
    }
    throw_if(errors);

    if (s.pi2 || s.market)
    {
        double const pi2 = resolve_pi2(s);
        auto mech_params = s.mechanism(pi2);
        for (double d : d_all)
        {
            auto e = validate_participation(s.consumer(d), mech_params);
            errors.insert(errors.end(), e.begin(), e.end());
        }
        throw_if(errors);
    }

    s.hash = sha256_hex(canonical(s.resolved));
    return s;
}

void require_for(Scenario const& s, Experiment experiment)
{
    if (!s.pi2 && !s.market)
    {
        throw ValidationError(
            "market section required: pi2 = derive-from-market");
    }
    switch (experiment)
    {
        case Experiment::table2:
            if (s.d_values.empty())
                throw ValidationError("table2 requires [consumer] d values");
            if (s.p > 0
                && s.count % static_cast<std::size_t>(std::llround(1 / s.p))
                       != 0)
            {
                throw ValidationError(
                    "table2 requires [consumer] count divisible by 1/p");
            }
            break;
        case Experiment::fig3:
            if (!s.market)
                throw ValidationError("market section required for fig3");
            if (s.d_values.empty())
                throw ValidationError("fig3 requires [consumer] d values");
            if (s.p_grid.empty())
                throw ValidationError("fig3 requires [mechanism] p_grid");
            break;
        case Experiment::compare:
            if (!s.horizon)
                throw ValidationError("horizon section required for compare");
            if (s.d_values.size() != 1)
                throw ValidationError("compare requires exactly one d value");
            break;
        case Experiment::event:
            if (!s.delta_q_star && !s.market)
            {
                throw ValidationError(
                    "market section required: delta_q_star = foc");
            }
            if (!(s.p > 0) || !(resolve_pi2(s) > 0))
            {
                throw ValidationError(
                    "event requires p > 0 and pi2 > 0 to form groups");
            }
            if (s.population_d.empty() && s.d_values.size() != 1)
            {
                throw ValidationError(
                    "event requires exactly one d value or population_d");
            }
            break;
        case Experiment::validate:
            break;
    }
}

double resolve_delta_q_star(Scenario const& s)
{
    if (s.delta_q_star)
        return *s.delta_q_star;
    if (!s.market)
        throw ValidationError("market section required: delta_q_star = foc");
    return optimal_reduction(*s.market, s.pi0).delta_q_star;
}

double resolve_pi2(Scenario const& s)
{
    if (s.pi2)
        return *s.pi2;
    if (!s.market)
        throw ValidationError(
            "market section required: pi2 = derive-from-market");
    return tmc_price(*s.market, resolve_delta_q_star(s));
}

}  // namespace drb
