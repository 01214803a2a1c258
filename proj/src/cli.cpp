#include "chatelet/cli.hpp"

#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chatelet/counter.hpp"
#include "chatelet/errors.hpp"
#include "chatelet/euler.hpp"
#include "chatelet/forms.hpp"
#include "chatelet/instance_io.hpp"
#include "chatelet/localdens.hpp"

namespace chatelet::cli {

namespace {

using nlohmann::json;

double sig12(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v));
}

json big_count(u128 v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  return to_string(v);
}

json factor_json(const euler::EulerFactor& f) {
  json hist = json::array();
  for (double h : f.history) hist.push_back(sig12(h));
  return {{"p", f.p},
          {"value", sig12(f.value)},
          {"truncation_level", f.truncation_level},
          {"tail_bound", sig12(f.tail_bound)},
          {"exact", f.exact},
          {"method", euler::to_string(f.method)},
          {"prefactor", sig12(f.prefactor)},
          {"series", sig12(f.series)},
          {"history", hist}};
}

json report_json(const euler::ConstantReport& r) {
  json factors = json::array();
  for (const auto& f : r.factors) factors.push_back(factor_json(f));
  json partial = json::array();
  for (const auto& pp : r.partial_products) partial.push_back({{"cutoff", pp.cutoff}, {"product", sig12(pp.product)}});
  return {{"instance", r.instance_id},
          {"volume", sig12(r.volume)},
          {"prime_cutoff", r.prime_cutoff},
          {"truncation", r.truncation},
          {"product", sig12(r.product)},
          {"predicted_constant", sig12(r.predicted_constant)},
          {"product_tail_estimate", sig12(r.product_tail_estimate)},
          {"factors", factors},
          {"diagnostics",
           {{"partial_products", partial},
            {"nonpositive_factors", r.nonpositive_factors},
            {"bad_primes", r.bad_primes}}}};
}

std::vector<double> parse_x_list(const std::string& text) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument("--X-list: cannot parse '" + item + "'");
    xs.push_back(v);
  }
  if (xs.empty()) throw std::invalid_argument("--X-list: no values given");
  return xs;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice sums of r(L(x)) r(C(x)) against their predicted Euler-product constant"};
  app.require_subcommand(1);

  std::string instance_path;
  unsigned threads = 1;
  std::string format = "csv";
  app.add_option("--instance", instance_path, "Instance JSON file (default: bundled golden instance)");
  app.add_option("--threads", threads, "Worker threads for lattice sums")->check(CLI::Range(1u, 1024u));

  auto* validate_cmd = app.add_subcommand("validate", "Check irreducibility, positivity and the boundary bound");
  auto* volume_cmd = app.add_subcommand("volume", "Exact area of the region");

  std::uint64_t d1 = 1, d2 = 1;
  auto* rho_cmd = app.add_subcommand("rho", "Local density rho(d1, d2)");
  rho_cmd->add_option("--d1", d1, "Modulus for L")->required()->check(CLI::PositiveNumber);
  rho_cmd->add_option("--d2", d2, "Modulus for C")->required()->check(CLI::PositiveNumber);

  std::uint64_t p = 3;
  unsigned V = euler::kSmallPrimeTruncation;
  bool large = false;
  auto* ef_cmd = app.add_subcommand("eulerfactor", "Euler factor K_p for an odd prime p");
  ef_cmd->add_option("--p", p, "Odd prime")->required();
  ef_cmd->add_option("--V", V, "Truncation level (max nu1 + nu2)");
  ef_cmd->add_flag("--large", large, "Use the first-order formula (good primes only)");

  unsigned n_max = 12;
  double tol = 1e-3;
  auto* k2_cmd = app.add_subcommand("k2", "2-adic factor K_2");
  k2_cmd->add_option("--nmax", n_max, "Largest level n");
  k2_cmd->add_option("--tol", tol, "Stabilization tolerance");

  euler::ConstantOptions copts;
  auto add_constant_opts = [&](CLI::App* cmd) {
    cmd->add_option("--P", copts.prime_cutoff, "Prime cutoff");
    cmd->add_option("--V", copts.truncation, "Truncation level for small primes");
  };
  auto* constant_cmd = app.add_subcommand("constant", "Predicted constant pi^2 vol(R) prod K_p");
  add_constant_opts(constant_cmd);

  double X = 0.0;
  auto* sum_cmd = app.add_subcommand("sum", "Exact lattice sum S(X)");
  sum_cmd->add_option("--X", X, "Dilation factor")->required();

  std::string x_list;
  auto* verify_cmd = app.add_subcommand("verify", "Convergence table S(X) / (predicted X^2)");
  verify_cmd->add_option("--X-list", x_list, "Comma-separated increasing X values")->required();
  add_constant_opts(verify_cmd);
  verify_cmd->add_option("--format", format, "csv (default) or json")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    ProblemInstance inst = instance_path.empty() ? golden_instance() : load_instance(instance_path);
    if (content(inst.L) > 1) err << "warning: L = " << inst.L.to_string() << " is not primitive\n";
    json doc;
    std::string text;

    if (*validate_cmd) {
      const HypothesisReport rep = check_hypotheses(inst);
      doc = {{"instance", inst.id},
             {"irreducible", rep.irreducible},
             {"linear_factor", rep.factor ? json(rep.factor->describe()) : json(nullptr)},
             {"positive", rep.positive},
             {"positivity_inconclusive", rep.positivity_inconclusive},
             {"positivity_detail", rep.positivity_detail},
             {"boundary_length", sig12(rep.boundary.boundary_length)},
             {"r_infinity", sig12(rep.boundary.r_infinity)},
             {"c", sig12(inst.region.c())},
             {"boundary_bound", rep.boundary.satisfies_bound},
             {"ok", rep.ok()}};
      out << doc.dump(2) << "\n";
      for (const auto& f : rep.failures()) err << "validation failed: " << f << "\n";
      return rep.ok() ? kSuccess : kValidationFailure;
    }
    if (*volume_cmd) {
      const Rational area = region_area(inst.region);
      doc = {{"instance", inst.id}, {"volume", sig12(static_cast<double>(area))}, {"volume_exact", area.str()}};
    } else if (*rho_cmd) {
      const auto d = localdens::rho(d1, d2, inst.L, inst.C);
      doc = {{"d1", d.d1}, {"d2", d.d2}, {"count", big_count(d.count)}};
    } else if (*ef_cmd) {
      doc = factor_json(large ? euler::k_p_large(p, inst.L, inst.C) : euler::k_p(p, inst.L, inst.C, V));
    } else if (*k2_cmd) {
      doc = factor_json(euler::k_2(inst.L, inst.C, n_max, tol));
    } else {
      const ValidatedInstance valid = ValidatedInstance::validate(std::move(inst));
      if (*constant_cmd) {
        doc = report_json(euler::predicted_constant(valid, copts));
      } else if (*sum_cmd) {
        const auto s = counter::sum_S(valid, X, {threads, counter::ScanOrder::rows});
        doc = {{"instance", valid.id()},
               {"X", sig12(s.X)},
               {"lattice_points", s.lattice_points},
               {"S", big_count(s.S)},
               {"S_over_X2", sig12(s.S_over_X2)}};
      } else {
        const auto rows = counter::convergence_table(valid, parse_x_list(x_list), copts, threads);
        if (format == "csv") {
          std::string csv = "X,S,predicted,ratio,eta_ref\n";
          for (const auto& r : rows) {
            csv += format_number(r.X) + "," + to_string(r.S) + "," + format_number(r.predicted_main_term) + "," +
                   format_number(r.ratio) + "," + format_number(r.eta_reference) + "\n";
          }
          out << csv;
          return kSuccess;
        }
        json arr = json::array();
        for (const auto& r : rows) {
          arr.push_back({{"X", sig12(r.X)},
                         {"S", big_count(r.S)},
                         {"predicted", sig12(r.predicted_main_term)},
                         {"ratio", sig12(r.ratio)},
                         {"log_X", sig12(r.log_X)},
                         {"eta_ref", sig12(r.eta_reference)},
                         {"scaled_error", sig12(r.scaled_error)}});
        }
        doc = arr;
      }
    }
    out << doc.dump(2) << "\n";
    return kSuccess;
  } catch (const InstanceFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const InstanceInvalid& e) {
    err << "validation failed: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const CertificationFailed& e) {
    err << "validation failed: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ArithmeticOverflow& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ScaleLimit& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const euler::RoutedToExact& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"chatelet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace chatelet::cli
