#include "funnelsim/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "funnelsim/config.hpp"
#include "funnelsim/errors.hpp"
#include "funnelsim/probes.hpp"
#include "funnelsim/trace_io.hpp"

namespace funnelsim {

namespace {

struct CommonFlags {
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::string> integrator;
  std::optional<std::string> realization;
};

ConfigOverrides to_overrides(const CommonFlags& flags) {
  ConfigOverrides o;
  o.dt = flags.dt;
  o.horizon = flags.horizon;
  if (flags.integrator) {
    o.integrator = parse_integrator(*flags.integrator);
  }
  o.realization = flags.realization;
  return o;
}

struct RunOutcome {
  int code = kExitOk;
  std::string log;
};

RunOutcome run_one(const std::string& source, const ConfigOverrides& overrides, const std::filesystem::path& dir,
                   bool svg) {
  RunOutcome outcome;
  std::ostringstream log;
  try {
    const LoadedScenario loaded = load_scenario(source, overrides);
    SimulationResult result = simulate(loaded.scenario);
    const VerificationVerdict verdict = verify_run(result.trace, result.report, loaded.caps);

    std::filesystem::create_directories(dir);
    {
      std::ofstream csv(dir / "trace.csv", std::ios::binary);
      write_trace_csv(csv, result.trace);
    }
    {
      std::ofstream rep(dir / "report.txt", std::ios::binary);
      write_report(rep, loaded.name, result.report, verdict, loaded.notes);
    }
    if (svg) {
      std::ofstream plot(dir / "plot.svg", std::ios::binary);
      write_svg(plot, result.trace, loaded.name);
    }

    if (!result.report.completed) {
      outcome.code = kExitStepCollapse;
    } else if (!verdict.passed()) {
      outcome.code = kExitVerification;
    }
    log << loaded.name << ": " << (result.report.completed ? "completed" : result.report.failure)
        << ", verdict=" << (verdict.passed() ? "pass" : "fail") << ", steps=" << result.report.steps
        << ", rejections=" << result.report.rejections << ", out=" << dir.string() << '\n';
  } catch (const ConfigError& e) {
    outcome.code = kExitConfig;
    log << source << ": config error: " << e.what() << '\n';
  } catch (const InadmissibleInitialCondition& e) {
    outcome.code = kExitInadmissible;
    log << source << ": inadmissible initial condition: " << e.what() << '\n';
  } catch (const std::exception& e) {
    outcome.code = kExitInternal;
    log << source << ": internal error: " << e.what() << '\n';
  }
  outcome.log = log.str();
  return outcome;
}

std::filesystem::path default_out() {
  if (const char* env = std::getenv("FUNNELSIM_OUT"); env && *env) {
    return env;
  }
  return "funnelsim-out";
}

void emit(std::ostream& out, const std::string& key, const std::string& value) { out << key << '=' << value << '\n'; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Funnel control simulator for systems with operator-driven internal dynamics"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string out_dir;
  bool svg = false;
  int jobs = 1;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dt", common.dt, "Base step (overrides [sim] dt)")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", common.horizon, "Horizon (overrides [sim] horizon)")->check(CLI::PositiveNumber);
    sub->add_option("--realization", common.realization, "Use convolution or transport for the internal operator")
        ->check(CLI::IsMember({"convolution", "transport"}));
    sub->add_option("--seed", seed, "Seed for randomized probes");
  };

  std::vector<std::string> sources;
  auto* run = app.add_subcommand("run", "Simulate presets or config files and verify the closed loop");
  run->add_option("source", sources, "Preset name or config path")->required();
  add_common(run);
  run->add_option("--integrator", common.integrator, "euler or rk4")->check(CLI::IsMember({"euler", "rk4"}));
  run->add_option("--out", out_dir, "Output directory (default $FUNNELSIM_OUT or ./funnelsim-out)");
  run->add_flag("--svg", svg, "Also write plot.svg");
  run->add_option("--jobs", jobs, "Run several sources concurrently")->check(CLI::PositiveNumber);

  std::string probe_source;
  std::string probe_name;
  std::optional<std::size_t> trials;
  double c1 = 1.0;
  double t_split = 2.0;
  double tau = 1.0;
  double delta = 0.1;
  auto* probe = app.add_subcommand("probe", "Empirical causality, BIBO and Lipschitz checks of the operator");
  probe->add_option("source", probe_source, "Preset name or config path")->required();
  probe->add_option("probe", probe_name, "causality, bibo or lipschitz")
      ->required()
      ->check(CLI::IsMember({"causality", "bibo", "lipschitz"}));
  add_common(probe);
  probe->add_option("--trials", trials, "Number of randomized trials")->check(CLI::PositiveNumber);
  probe->add_option("--c1", c1, "Input bound for the BIBO probe")->check(CLI::PositiveNumber);
  probe->add_option("--t", t_split, "Lipschitz window start")->check(CLI::NonNegativeNumber);
  probe->add_option("--tau", tau, "Lipschitz window length")->check(CLI::PositiveNumber);
  probe->add_option("--delta", delta, "Lipschitz perturbation radius")->check(CLI::PositiveNumber);
  probe->add_option("--jobs", jobs, "Threads for trials")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_like(args.rbegin(), args.rend());
  try {
    app.parse(argv_like);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << "run with --help for usage\n";
    return kExitConfig;
  }

  ConfigOverrides overrides;
  try {
    overrides = to_overrides(common);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kExitConfig;
  }

  if (*run) {
    const std::filesystem::path base = out_dir.empty() ? default_out() : std::filesystem::path(out_dir);
    std::vector<RunOutcome> outcomes(sources.size());
    const auto n = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      const auto name = std::filesystem::path(sources[k]).stem().string();
      const auto dir = sources.size() == 1 ? base : base / name;
      outcomes[k] = run_one(sources[k], overrides, dir, svg);
    }
    int code = kExitOk;
    for (const auto& o : outcomes) {
      (o.code == kExitOk ? out : err) << o.log;
      if (code == kExitOk) {
        code = o.code;
      }
    }
    return code;
  }

  try {
    const LoadedScenario loaded = load_scenario(probe_source, overrides);
    const InternalOperator& op = *loaded.op;
    omp_set_num_threads(jobs);
    emit(out, "scenario", loaded.name);
    emit(out, "operator", std::string(op.kind()));
    emit(out, "probe", probe_name);
    emit(out, "seed", std::to_string(seed));
    ProbeOptions opts;
    opts.dt = loaded.scenario.dt;
    opts.horizon = common.horizon.value_or(loaded.scenario.horizon);
    if (probe_name == "causality") {
      const auto report = probe_causality_trials(op, trials.value_or(100), seed, opts);
      emit(out, "trials", std::to_string(report.trials));
      emit(out, "passed", std::to_string(report.passed));
      if (report.first_failure) {
        emit(out, "first_failure_trial", std::to_string(*report.first_failure));
      }
      emit(out, "causal", report.ok() ? "true" : "false");
      return report.ok() ? kExitOk : kExitCausality;
    }
    if (probe_name == "bibo") {
      const auto report = probe_bibo(op, c1, trials.value_or(20), seed, opts);
      emit(out, "trials", std::to_string(report.trials));
      emit(out, "c1", format_number(report.c1));
      emit(out, "c2", format_number(report.c2));
      emit(out, "worst_profile", report.worst_profile);
      if (const auto* conv = dynamic_cast<const ConvolutionOperator*>(&op)) {
        emit(out, "measure_total_variation", format_number(conv->measure().total_variation()));
      }
      return kExitOk;
    }
    const SignalFunction base = [](double t, std::span<double> v) {
      for (auto& x : v) {
        x = 0.5 * std::sin(t);
      }
    };
    const auto report = probe_lipschitz(op, base, t_split, tau, delta, trials.value_or(20), seed, opts.dt);
    emit(out, "trials", std::to_string(report.trials));
    emit(out, "skipped", std::to_string(report.skipped));
    emit(out, "t", format_number(t_split));
    emit(out, "tau", format_number(tau));
    emit(out, "delta", format_number(delta));
    emit(out, "estimate", format_number(report.estimate));
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace funnelsim
