// Copyright 2026 The orsim Authors
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

#pragma once

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orsim/circuit.hpp"
#include "orsim/config.hpp"
#include "orsim/dp_gravity.hpp"
#include "orsim/experiment.hpp"
#include "orsim/io.hpp"
#include "orsim/report.hpp"

namespace orsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

namespace detail {

inline std::string sig6(double v) { return gravity::format_sig(v, 6); }

inline std::string entry(Complex z) {
  const double re = std::abs(z.real()) < 1e-15 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-15 ? 0.0 : z.imag();
  if (im == 0) return sig6(re);
  return sig6(re) + (im < 0 ? "-" : "+") + sig6(std::abs(im)) + "i";
}

inline std::string matrix_rows(const DensityMatrix& rho) {
  std::string out;
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    out += "  [";
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      auto s = entry(rho(r, c));
      if (s.size() < 12) s.insert(0, 12 - s.size(), ' ');
      out += " " + s;
    }
    out += " ]\n";
  }
  return out;
}

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

inline config::ReplicationConfig load(const std::string& config_path, const std::string& calibration_path) {
  auto cfg = config::load_config(config_path);
  if (!calibration_path.empty()) config::apply_calibration(cfg.protocol, io::load_calibration(calibration_path));
  return cfg;
}

}  // namespace detail

/// Runs one CLI invocation; argv[0] is the program name.
inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"orsim: objective-reduction experiment simulator"};
  app.require_subcommand(1);

  // predict
  std::string predict_config, predict_cal, predict_csv;
  auto* predict = app.add_subcommand("predict", "Staged single-qubit prediction for a replication config");
  predict->add_option("config", predict_config, "Replication config (YAML)")->required();
  predict->add_option("--calibration", predict_cal, "Calibration JSON overriding per-qubit T1/T2");
  predict->add_option("--csv", predict_csv, "Also write the stage matrices as CSV");

  // table
  double table_sep = 1e-4;
  double table_gamma = gravity::kGammaTable;
  std::vector<std::size_t> table_bits{2, 4, 8, 16, 32, 64};
  std::vector<double> table_masses{1e-15, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10};
  std::string table_format = "text", table_out;
  auto* table = app.add_subcommand("table", "Collapse-time grid over bit counts and masses per bit");
  table->add_option("--sep", table_sep, "Separation in metres")->capture_default_str();
  table->add_option("--gamma", table_gamma, "Collapse-time prefactor (1/(8*pi) = 0.0398)")->capture_default_str();
  table->add_option("--bits", table_bits, "Comma-separated bit counts")->delimiter(',')->capture_default_str();
  table->add_option("--masses", table_masses, "Comma-separated masses per bit in kg")->delimiter(',')->capture_default_str();
  table->add_option("--format", table_format, "text or csv")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
  table->add_option("--out", table_out, "Write to file instead of stdout");

  // simulate
  std::string sim_config, sim_cal, sim_test_out, sim_control_out, sim_joint_out;
  std::optional<std::uint64_t> sim_shots, sim_seed;
  std::optional<std::size_t> sim_reps;
  auto* simulate = app.add_subcommand("simulate", "Sample shot counts for both arms");
  simulate->add_option("config", sim_config, "Replication config (YAML)")->required();
  simulate->add_option("--calibration", sim_cal, "Calibration JSON overriding per-qubit T1/T2");
  simulate->add_option("--shots", sim_shots, "Shots per repetition (overrides run.shots)");
  simulate->add_option("--seed", sim_seed, "RNG seed (overrides run.seed)");
  simulate->add_option("--repetitions", sim_reps, "Repetitions with alternating roles (overrides run.repetitions)");
  simulate->add_option("--test-out", sim_test_out, "Counts JSON for the test arm")->required();
  simulate->add_option("--control-out", sim_control_out, "Counts JSON for the control arm")->required();
  simulate->add_option("--joint-out", sim_joint_out, "Joint counts JSON of the first repetition");

  // analyze
  std::string an_test, an_control, an_csv, an_md, an_svg;
  std::optional<double> an_delay;
  auto* analyze = app.add_subcommand("analyze", "Two-proportion comparison of test and control counts");
  analyze->add_option("--test", an_test, "Test-arm counts JSON")->required();
  analyze->add_option("--control", an_control, "Control-arm counts JSON")->required();
  analyze->add_option("--delay", an_delay, "Delay in us; adds a collapse-time fit to the report");
  analyze->add_option("--csv", an_csv, "Write the report as CSV");
  analyze->add_option("--markdown", an_md, "Write the report as markdown");
  analyze->add_option("--svg", an_svg, "Write the bar chart as SVG");

  // fit
  std::string fit_test, fit_control;
  double fit_delay = 0;
  auto* fit = app.add_subcommand("fit", "Collapse time from the ratio of distances from 50:50");
  fit->add_option("--test", fit_test, "Test-arm counts JSON")->required();
  fit->add_option("--control", fit_control, "Control-arm counts JSON")->required();
  fit->add_option("--delay", fit_delay, "Delay in us")->required();

  // export
  std::string ex_config, ex_circuit, ex_qasm, ex_json;
  auto* exp = app.add_subcommand("export", "Emit the protocol circuit as OpenQASM 3 and/or JSON");
  exp->add_option("--config", ex_config, "Replication config (YAML)");
  exp->add_option("--circuit", ex_circuit, "Existing circuit JSON to export instead");
  exp->add_option("--qasm", ex_qasm, "Write QASM to file instead of stdout");
  exp->add_option("--json", ex_json, "Also write the circuit JSON");

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*predict) {
      const auto cfg = detail::load(predict_config, predict_cal);
      const auto pred = orsim::predict(cfg.protocol);
      std::string csv = "stage,row,col,re,im\n";
      for (const auto& s : pred.stages) {
        out << "stage " << s.name << "\n" << detail::matrix_rows(s.rho);
        for (std::size_t r = 0; r < 2; ++r)
          for (std::size_t c = 0; c < 2; ++c)
            csv += s.name + "," + std::to_string(r) + "," + std::to_string(c) + "," + detail::sig6(s.rho(r, c).real()) +
                   "," + detail::sig6(s.rho(r, c).imag()) + "\n";
      }
      const auto& p = pred.probabilities;
      out << "probabilities " << detail::sig6(p[0]) << " " << detail::sig6(p[1]) << "\n";
      out << "P(0)=" << detail::fixed3(p[0]) << " P(1)=" << detail::fixed3(p[1]) << "\n";
      if (!predict_csv.empty()) {
        csv += "probability,0,," + detail::sig6(p[0]) + ",0\nprobability,1,," + detail::sig6(p[1]) + ",0\n";
        io::write_file(predict_csv, csv);
      }
      return kExitOk;
    }

    if (*table) {
      if (!(table_sep > 0)) throw std::invalid_argument("--sep must be positive");
      if (!(table_gamma > 0)) throw std::invalid_argument("--gamma must be positive");
      for (double m : table_masses)
        if (!(m > 0)) throw std::invalid_argument("--masses must be positive");
      for (auto b : table_bits)
        if (b == 0) throw std::invalid_argument("--bits must be positive");
      const auto t = gravity::fig1_table(table_bits, table_masses, table_sep, table_gamma);
      const auto text = table_format == "csv" ? gravity::table_to_csv(t) : gravity::table_to_text(t);
      if (table_out.empty()) out << text;
      else io::write_file(table_out, text);
      return kExitOk;
    }

    if (*simulate) {
      auto cfg = detail::load(sim_config, sim_cal);
      if (sim_shots) cfg.run.shots = *sim_shots;
      if (sim_seed) cfg.run.seed = *sim_seed;
      if (sim_reps) cfg.run.repetitions = *sim_reps;
      if (cfg.run.shots == 0) throw std::invalid_argument("--shots must be positive");
      if (cfg.run.repetitions == 0) throw std::invalid_argument("--repetitions must be positive");
      auto res = run_experiment(cfg.protocol, cfg.run.shots, cfg.run.seed, cfg.run.repetitions);
      if (!sim_cal.empty()) {
        const auto cal = io::load_calibration(sim_cal);
        res.test.calibration = cal;
        res.control.calibration = cal;
      }
      io::write_file(sim_test_out, io::dump(io::counts_to_json(res.test)));
      io::write_file(sim_control_out, io::dump(io::counts_to_json(res.control)));
      if (!sim_joint_out.empty()) io::write_file(sim_joint_out, io::dump(io::counts_to_json(res.raw.front())));
      out << "test P(1)=" << detail::sig6(res.report.test.p1) << " control P(1)=" << detail::sig6(res.report.control.p1)
          << " z=" << detail::sig6(res.report.z) << "\n";
      return kExitOk;
    }

    if (*analyze) {
      const auto t = io::load_counts(an_test);
      const auto c = io::load_counts(an_control);
      auto report = analyze_counts(t, c);
      if (an_delay) report.fit = fit_tau(t, c, *an_delay);
      out << report_to_markdown(report);
      if (!an_csv.empty()) write_report(report, ReportFormat::csv, an_csv);
      if (!an_md.empty()) write_report(report, ReportFormat::markdown, an_md);
      if (!an_svg.empty()) write_report(report, ReportFormat::svg, an_svg);
      return kExitOk;
    }

    if (*fit) {
      const auto f = fit_tau(io::load_counts(fit_test), io::load_counts(fit_control), fit_delay);
      out << "status=" << to_string(f.status) << " tau_us=" << detail::sig6(f.tau_us)
          << " tau_err_us=" << detail::sig6(f.tau_err_us) << " ci95_us=[" << detail::sig6(f.ci_low_us) << ", "
          << detail::sig6(f.ci_high_us) << "] ratio=" << detail::sig6(f.ratio) << "\n";
      return kExitOk;
    }

    if (*exp) {
      if (ex_config.empty() == ex_circuit.empty()) throw std::invalid_argument("export needs exactly one of --config or --circuit");
      const auto circuit = ex_circuit.empty() ? build_protocol(config::load_config(ex_config).protocol)
                                              : io::circuit_from_json(io::parse_json(io::read_file(ex_circuit), ex_circuit), ex_circuit);
      const auto qasm = export_qasm3(circuit);
      if (ex_qasm.empty()) out << qasm;
      else io::write_file(ex_qasm, qasm);
      if (!ex_json.empty()) io::write_file(ex_json, io::dump(io::circuit_to_json(circuit)));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    // ConfigError and io::FormatError derive from invalid_argument.
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace orsim::cli
