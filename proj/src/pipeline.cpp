#include "selftest/pipeline.hpp"

#include <cstdio>
#include <sstream>

namespace selftest {

bool SelfTestReport::passed() const {
  return conditions.passed && isometry_ran && isometry_fidelity >= 1.0 - fidelity_tol;
}

SelfTestReport run_selftest(const Strategy& s, const FamilyParams& params, double tol,
                            double fidelity_tol) {
  SelfTestReport report;
  report.params = params;
  report.tol = tol;
  report.fidelity_tol = fidelity_tol;
  report.conditions = family_condition_check(s, params, tol);
  if (!report.conditions.passed) return report;

  const int n = s.n_parties();
  struct Identities {
    const Strategy& s;
    double tol;
    std::optional<CheckReport> operator()(const GhzParams& p) const {
      return (p.n == 2) ? tilted_identities(s, p.theta, tol)
                        : ghz_operator_identities(s, p.theta, tol);
    }
    std::optional<CheckReport> operator()(const SchmidtParams&) const { return std::nullopt; }
    std::optional<CheckReport> operator()(const WParams&) const {
      return w_operator_identities(s, tol);
    }
    std::optional<CheckReport> operator()(const DickeParams&) const { return std::nullopt; }
    std::optional<CheckReport> operator()(const GraphParams& p) const {
      return graph_anticommutation_check(s, p.g, tol);
    }
  };
  report.identities = std::visit(Identities{s, tol}, params);

  std::vector<int> target_regs(n);
  for (int p = 0; p < n; ++p) target_regs[p] = n + p;

  if (const auto* schmidt = std::get_if<SchmidtParams>(&params)) {
    const QuditIsometryOperators ops = extract_schmidt_operators(s, schmidt->c, tol * 10.0);
    report.identities = schmidt_operator_identities(s, ops, schmidt->c, tol * 10.0);
    const StateVector out = qudit_isometry(ops, s.state);
    const FactorizationReport fact =
        factorization_check(out, schmidt_state(schmidt->c, schmidt->n), target_regs);
    report.isometry_fidelity = fact.target_fidelity;
    report.isometry_residual = fact.residual_norm;
    if (!fact.degenerate) report.junk_dims = fact.junk_state.dims;
  } else {
    const std::vector<PartyZX> ops = strategy_swap_operators(s, family_swap_angle(params));
    const StateVector out = qubit_swap_isometry(ops, s.state);
    const FactorizationReport fact =
        factorization_check(out, family_target_state(params), target_regs);
    report.isometry_fidelity = fact.target_fidelity;
    report.isometry_residual = fact.residual_norm;
    if (!fact.degenerate) report.junk_dims = fact.junk_state.dims;
    report.measurement = measurement_selftest_check(s, params, tol * 10.0);
  }
  report.isometry_ran = true;
  return report;
}

nlohmann::json selftest_report_to_json(const SelfTestReport& r) {
  nlohmann::json j;
  j["params"] = family_params_to_json(r.params);
  j["tol"] = r.tol;
  j["fidelity_tol"] = r.fidelity_tol;
  j["passed"] = r.passed();
  j["conditions"] = check_report_to_json(r.conditions);
  if (r.identities) j["identities"] = check_report_to_json(*r.identities);
  if (r.measurement) j["measurement"] = check_report_to_json(*r.measurement);
  if (r.isometry_ran) {
    j["isometry"] = {{"fidelity", r.isometry_fidelity},
                     {"residual", r.isometry_residual},
                     {"junk_dims", r.junk_dims}};
  }
  return j;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void csv_section(std::ostringstream& out, const std::string& section, const CheckReport& rep) {
  for (const ResidualEntry& e : rep.residuals)
    out << section << "," << e.label << "," << fmt(e.residual) << "\n";
}

}  // namespace

std::string selftest_report_to_csv(const SelfTestReport& r) {
  std::ostringstream out;
  out << "section,label,value\n";
  csv_section(out, "conditions", r.conditions);
  if (r.identities) csv_section(out, "identities", *r.identities);
  if (r.measurement) csv_section(out, "measurement", *r.measurement);
  if (r.isometry_ran) {
    out << "isometry,fidelity," << fmt(r.isometry_fidelity) << "\n";
    out << "isometry,residual," << fmt(r.isometry_residual) << "\n";
    out << "isometry,junk_dims,";
    for (std::size_t i = 0; i < r.junk_dims.size(); ++i)
      out << (i ? " " : "") << r.junk_dims[i];
    out << "\n";
  }
  out << "summary,passed," << (r.passed() ? 1 : 0) << "\n";
  return out.str();
}

}  // namespace selftest
