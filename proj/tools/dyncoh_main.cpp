// Command-line surface of the dynamical-coherence library: measure a single
// channel, sweep the amplitude-damping family, run the built-in reference
// example, or play the channel-discrimination game.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dyncoh/channel_distance.hpp"
#include "dyncoh/channel_io.hpp"
#include "dyncoh/discrimination.hpp"
#include "dyncoh/errors.hpp"
#include "dyncoh/measures.hpp"
#include "json.hpp"

namespace {

using dyncoh::ConvergenceError;
using dyncoh::KrausChannel;
using dyncoh::MioVariant;
using dyncoh::OptimizerConfig;
using dyncoh::StaticMeasure;
using dyncoh::ValidationError;
using nlohmann::json;

constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kSeedEnvVar = "DYNCOH_SEED";
// Four-decimal reference value for the built-in `example` fixture.
constexpr double kExampleReference = 0.186758;

std::string g9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string manifest_path_for(const std::string& out_path) {
  const auto slash = out_path.find_last_of("/\\");
  const auto dot = out_path.find_last_of('.');
  const bool has_ext =
      dot != std::string::npos &&
      (slash == std::string::npos || dot > slash);
  return (has_ext ? out_path.substr(0, dot) : out_path) + ".manifest.json";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write output file '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing output file '" + path + "'");
}

void write_json_file(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& command, const json& parameters,
                    std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  if (outputs.empty()) return;
  const json manifest{{"command", command},
                      {"parameters", parameters},
                      {"tool_version", kToolVersion},
                      {"seed", seed},
                      {"outputs", outputs}};
  write_json_file(manifest_path_for(outputs.front()), manifest);
}

// ---------------------------------------------------------------- measure --

struct MeasureArgs {
  std::string channel;
  std::string measure = "l1";
  bool measure_given = false;
  std::string mode = "nonpost";
  std::string method = "optimize";
  std::string variant = "strict";
  double tol = 1e-6;
  std::uint64_t seed = 1;
  std::string out = "measure_report.json";
};

// If the channel is amplitude damping, returns its decay parameter.
bool detect_amplitude_damping(const KrausChannel& ch, double* eta_out) {
  if (ch.dim_in() != 2 || ch.dim_out() != 2) return false;
  const dyncoh::ChoiMatrix j = dyncoh::to_choi(ch);
  // For amplitude damping, N(|1><1|) = diag(eta, 1-eta).
  const double eta = j.basis_block(1)(0, 0).real();
  if (eta < -1e-9 || eta > 1.0 + 1e-9) return false;
  const double clamped = std::clamp(eta, 0.0, 1.0);
  const dyncoh::ChoiMatrix ref = dyncoh::to_choi(dyncoh::amplitude_damping(clamped));
  if (dyncoh::max_abs_diff(j.matrix(), ref.matrix()) > 1e-6) return false;
  *eta_out = clamped;
  return true;
}

int run_measure(const MeasureArgs& a) {
  const KrausChannel ch = dyncoh::resolve_channel(a.channel, a.tol);
  const MioVariant variant = dyncoh::mio_variant_from_string(a.variant);
  const bool selective = a.mode == "post";
  OptimizerConfig cfg;
  cfg.seed = a.seed;

  json report{{"command", "measure"},       {"channel", a.channel},
              {"dim_in", ch.dim_in()},      {"dim_out", ch.dim_out()},
              {"mode", a.mode},             {"method", a.method},
              {"seed", a.seed},             {"tol", a.tol},
              {"tool_version", kToolVersion}};
  std::vector<std::string> warnings;
  double value = 0.0;

  if (a.method == "optimize") {
    const StaticMeasure measure = dyncoh::static_measure_from_string(a.measure);
    value = measure == StaticMeasure::L2Total
                ? (selective ? dyncoh::t_l2_post(ch, cfg)
                             : dyncoh::t_l2_nonpost(ch, cfg))
                : dyncoh::t_tilde(ch, measure, cfg, selective);
    report["measure"] = a.measure;
  } else if (a.method == "closed-form") {
    if (a.measure_given && a.measure != "l2-total") {
      throw ValidationError(
          "measure: --method closed-form computes the l2-total measure; "
          "drop --measure or pass --measure l2-total");
    }
    report["measure"] = "l2-total";
    double cross = 0.0;
    if (selective) {
      double eta = 0.0;
      if (!detect_amplitude_damping(ch, &eta)) {
        throw ValidationError(
            "measure: --method closed-form --mode post has a closed form "
            "for amplitude damping channels only");
      }
      value = dyncoh::ad_analytic(eta);
      report["eta"] = eta;
      cross = dyncoh::t_l2_post(ch, cfg);
    } else {
      const dyncoh::ClosedFormResult r = dyncoh::t2_closed_form(ch, cfg);
      value = r.value;
      report["fallback_used"] = r.fallback_used;
      cross = dyncoh::t_l2_nonpost(ch, cfg);
    }
    report["cross_check_optimize"] = cross;
    if (std::abs(cross - value) > 1e-4) {
      warnings.push_back("cross-method disagreement: closed-form " +
                         g9(value) + " vs optimize " + g9(cross) +
                         " differs by more than 1e-4");
    }
  } else if (a.method == "sdp-diamond" || a.method == "t-a-non") {
    if (a.measure_given) {
      warnings.push_back(
          "--measure is ignored by the trace-norm distance methods");
    }
    const dyncoh::DistanceReport r = a.method == "sdp-diamond"
                                         ? dyncoh::t_diamond_mio(ch, variant)
                                         : dyncoh::t_a_non(ch, variant);
    value = r.value;
    report["mio_variant"] = dyncoh::to_string(variant);
    report["dual_value"] = r.dual_value;
    report["gap"] = r.gap;
  } else {
    throw ValidationError("measure: unknown --method '" + a.method + "'");
  }
  report["value"] = value;
  report["warnings"] = warnings;

  std::cout << "channel     : " << a.channel << "  (dim " << ch.dim_in()
            << " -> " << ch.dim_out() << ")\n"
            << "method      : " << a.method << "\n"
            << "mode        : " << a.mode << "\n";
  if (report.contains("measure")) {
    std::cout << "measure     : " << report["measure"].get<std::string>()
              << "\n";
  }
  if (report.contains("mio_variant")) {
    std::cout << "mio-variant : " << dyncoh::to_string(variant) << "\n";
  }
  std::cout << "value       = " << g9(value) << "\n";
  if (report.contains("dual_value")) {
    std::cout << "dual value  = " << g9(report["dual_value"].get<double>())
              << "\n"
              << "gap         = " << g9(report["gap"].get<double>()) << "\n";
  }
  if (report.contains("fallback_used") && report["fallback_used"].get<bool>()) {
    std::cout << "note        : closed form near-singular; value from the "
                 "direct optimizer\n";
  }
  if (report.contains("cross_check_optimize")) {
    std::cout << "cross-check = "
              << g9(report["cross_check_optimize"].get<double>())
              << "  (optimize)\n";
  }
  for (const std::string& w : warnings) std::cout << "WARNING: " << w << "\n";

  write_json_file(a.out, report);
  const json params{{"channel", a.channel},   {"measure", a.measure},
                    {"mode", a.mode},         {"method", a.method},
                    {"mio_variant", a.variant}, {"tol", a.tol},
                    {"out", a.out}};
  write_manifest("measure", params, a.seed, {a.out});
  return 0;
}

// ------------------------------------------------------------------ sweep --

struct SweepArgs {
  std::string channel = "ad";
  double eta_from = 0.0;
  double eta_to = 1.0;
  int steps = 101;
  std::string out;
  std::string plot;
  std::uint64_t seed = 1;
};

struct SweepRow {
  double eta;
  double t_post;
  double t_nonpost;
  bool fallback_used;
};

void write_sweep_svg(const std::string& path,
                     const std::vector<SweepRow>& rows) {
  const double w = 640, h = 420, ml = 70, mr = 20, mt = 20, mb = 50;
  double ymax = 1e-9;
  for (const SweepRow& r : rows) {
    ymax = std::max({ymax, r.t_post, r.t_nonpost});
  }
  ymax *= 1.05;
  const double x0 = rows.front().eta;
  const double x1 = rows.back().eta;
  const double xspan = x1 > x0 ? x1 - x0 : 1.0;
  auto px = [&](double eta) {
    return ml + (eta - x0) / xspan * (w - ml - mr);
  };
  auto py = [&](double v) { return h - mb - v / ymax * (h - mt - mb); };
  auto polyline = [&](auto get, const char* color) {
    std::string pts;
    for (const SweepRow& r : rows) {
      pts += g9(px(r.eta)) + "," + g9(py(get(r))) + " ";
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
  };
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
      "height=\"420\" viewBox=\"0 0 640 420\">\n"
      "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  // Axes.
  svg += "<line x1=\"" + g9(ml) + "\" y1=\"" + g9(h - mb) + "\" x2=\"" +
         g9(w - mr) + "\" y2=\"" + g9(h - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + g9(ml) + "\" y1=\"" + g9(mt) + "\" x2=\"" + g9(ml) +
         "\" y2=\"" + g9(h - mb) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + xspan * i / 4.0;
    const double fy = ymax * i / 4.0;
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", fx);
    svg += "<text x=\"" + g9(px(fx)) + "\" y=\"" + g9(h - mb + 18) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + label + "</text>\n";
    std::snprintf(label, sizeof label, "%.3g", fy);
    svg += "<text x=\"" + g9(ml - 8) + "\" y=\"" + g9(py(fy) + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + label + "</text>\n";
  }
  svg += "<text x=\"" + g9((ml + w - mr) / 2) + "\" y=\"" + g9(h - 10) +
         "\" font-size=\"14\" text-anchor=\"middle\">eta</text>\n";
  svg += polyline([](const SweepRow& r) { return r.t_post; }, "#1f77b4");
  svg += polyline([](const SweepRow& r) { return r.t_nonpost; }, "#d62728");
  svg +=
      "<text x=\"110\" y=\"40\" font-size=\"13\" fill=\"#1f77b4\">"
      "t_post</text>\n"
      "<text x=\"110\" y=\"58\" font-size=\"13\" fill=\"#d62728\">"
      "t_nonpost</text>\n"
      "</svg>\n";
  write_text_file(path, svg);
}

int run_sweep(const SweepArgs& a) {
  if (a.channel != "ad") {
    throw ValidationError("sweep: only --channel ad is supported");
  }
  if (a.steps < 2) throw ValidationError("sweep: --steps must be >= 2");
  if (a.eta_from < 0.0 || a.eta_to > 1.0 || a.eta_from > a.eta_to) {
    throw ValidationError("sweep: need 0 <= --eta-from <= --eta-to <= 1");
  }
  if (a.out.empty()) throw ValidationError("sweep: --out is required");

  OptimizerConfig cfg;
  cfg.seed = a.seed;
  auto point = [&cfg](double eta) {
    const dyncoh::ClosedFormResult nonpost =
        dyncoh::t2_closed_form(dyncoh::amplitude_damping(eta), cfg);
    return SweepRow{eta, dyncoh::ad_analytic(eta), nonpost.value,
                    nonpost.fallback_used};
  };
  // Points are independent; compute them concurrently, emit in eta order.
  std::vector<std::future<SweepRow>> futures;
  futures.reserve(static_cast<std::size_t>(a.steps));
  for (int i = 0; i < a.steps; ++i) {
    const double eta =
        a.eta_from + (a.eta_to - a.eta_from) * i / (a.steps - 1);
    futures.push_back(std::async(std::launch::async, point, eta));
  }
  std::vector<SweepRow> rows;
  rows.reserve(futures.size());
  for (auto& f : futures) rows.push_back(f.get());

  std::string csv = "eta,t_post,t_nonpost\n";
  int fallbacks = 0;
  for (const SweepRow& r : rows) {
    csv += g9(r.eta) + "," + g9(r.t_post) + "," + g9(r.t_nonpost) + "\n";
    fallbacks += r.fallback_used ? 1 : 0;
  }
  write_text_file(a.out, csv);

  std::vector<std::string> outputs{a.out};
  if (!a.plot.empty()) {
    write_sweep_svg(a.plot, rows);
    outputs.push_back(a.plot);
  }
  const json params{{"channel", a.channel}, {"eta_from", a.eta_from},
                    {"eta_to", a.eta_to},   {"steps", a.steps},
                    {"out", a.out},         {"plot", a.plot}};
  write_manifest("sweep", params, a.seed, outputs);
  std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
  if (!a.plot.empty()) std::cout << "wrote plot to " << a.plot << "\n";
  if (fallbacks > 0) {
    std::cout << "note: " << fallbacks
              << " point(s) used the direct optimizer (closed form "
                 "near-singular)\n";
  }
  return 0;
}

// ------------------------------------------------------------ sdp-example --

int run_sdp_example(const std::string& out, std::uint64_t seed) {
  const KrausChannel ch = dyncoh::builtin_channel("example");
  const dyncoh::DistanceReport paper =
      dyncoh::t_diamond_mio(ch, MioVariant::Paper);
  const dyncoh::DistanceReport strict =
      dyncoh::t_diamond_mio(ch, MioVariant::Strict);

  auto print_line = [](const char* name, const dyncoh::DistanceReport& r) {
    std::cout << "variant " << name << " : value = " << g9(r.value)
              << "  dual = " << g9(r.dual_value) << "  gap = " << g9(r.gap)
              << "\n";
  };
  print_line("paper ", paper);
  print_line("strict", strict);

  std::string matched = "none";
  if (std::abs(paper.value - kExampleReference) <= 1e-3) {
    matched = "paper";
  } else if (std::abs(strict.value - kExampleReference) <= 1e-3) {
    matched = "strict";
  }
  std::cout << "reference value " << kExampleReference
            << " matched by variant: " << matched << "\n";

  const json report{
      {"command", "sdp-example"},
      {"channel", "example"},
      {"reference_value", kExampleReference},
      {"matched_variant", matched},
      {"paper",
       {{"value", paper.value}, {"dual", paper.dual_value}, {"gap", paper.gap}}},
      {"strict",
       {{"value", strict.value},
        {"dual", strict.dual_value},
        {"gap", strict.gap}}},
      {"tool_version", kToolVersion}};
  write_json_file(out, report);
  write_manifest("sdp-example", json{{"out", out}}, seed, {out});
  return 0;
}

// ------------------------------------------------------------ discriminate --

struct DiscriminateArgs {
  std::string chan1;
  std::string chan2;
  long trials = 100000;
  std::uint64_t seed = 1;
  bool no_reference = false;
  double tol = 1e-6;
  std::string out = "discrimination_report.json";
};

int run_discriminate(const DiscriminateArgs& a) {
  if (a.trials < 1) {
    throw ValidationError("discriminate: --trials must be positive");
  }
  dyncoh::GameSpec spec{dyncoh::resolve_channel(a.chan1, a.tol),
                        dyncoh::resolve_channel(a.chan2, a.tol)};
  spec.trials = a.trials;
  spec.seed = a.seed;
  spec.use_reference = !a.no_reference;

  const double optimal = dyncoh::optimal_success(spec.n1, spec.n2);
  const dyncoh::SimulationResult sim = dyncoh::simulate(spec);
  const double z =
      (sim.empirical_rate - optimal) / std::max(sim.std_error, 1e-9);

  std::cout << "optimal success probability = " << g9(optimal) << "\n"
            << "empirical success rate      = " << g9(sim.empirical_rate)
            << "\n"
            << "standard error              = " << g9(sim.std_error) << "\n"
            << "z-score                     = " << g9(z) << "\n"
            << "trials = " << a.trials << ", seed = " << a.seed
            << ", reference ancilla = " << (spec.use_reference ? "yes" : "no")
            << "\n";

  const json report{{"command", "discriminate"},
                    {"chan1", a.chan1},
                    {"chan2", a.chan2},
                    {"optimal_success", optimal},
                    {"empirical_rate", sim.empirical_rate},
                    {"std_error", sim.std_error},
                    {"z_score", z},
                    {"trials", a.trials},
                    {"seed", a.seed},
                    {"use_reference", spec.use_reference},
                    {"tool_version", kToolVersion}};
  write_json_file(a.out, report);
  const json params{{"chan1", a.chan1},
                    {"chan2", a.chan2},
                    {"trials", a.trials},
                    {"use_reference", spec.use_reference},
                    {"tol", a.tol},
                    {"out", a.out}};
  write_manifest("discriminate", params, a.seed, {a.out});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dyncoh: dynamical coherence of finite-dimensional quantum channels"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  MeasureArgs m;
  CLI::App* measure =
      app.add_subcommand("measure", "Quantify one channel's coherence");
  measure->add_option("channel", m.channel,
                      "Channel file or built-in name (id, dephasing, "
                      "hadamard, pauli-x/y/z, ad:<eta>, example)")
      ->required();
  CLI::Option* measure_opt =
      measure->add_option("--measure", m.measure, "Static base measure")
          ->check(CLI::IsMember({"l1", "rel-ent", "l2-total"}))
          ->capture_default_str();
  measure->add_option("--mode", m.mode, "Selective (post) or not (nonpost)")
      ->check(CLI::IsMember({"post", "nonpost"}))
      ->capture_default_str();
  measure->add_option("--method", m.method, "Computation method")
      ->check(CLI::IsMember({"optimize", "sdp-diamond", "t-a-non",
                             "closed-form"}))
      ->capture_default_str();
  measure->add_option("--mio-variant", m.variant, "Free-set characterization")
      ->check(CLI::IsMember({"paper", "strict"}))
      ->capture_default_str();
  measure->add_option("--tol", m.tol, "Channel validation tolerance")
      ->capture_default_str();
  measure->add_option("--seed", m.seed, "Optimizer seed")
      ->envname(kSeedEnvVar)
      ->capture_default_str();
  measure->add_option("--out", m.out, "Structured report path")
      ->capture_default_str();

  SweepArgs s;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep the amplitude-damping family and write a CSV");
  sweep->add_option("--channel", s.channel, "Channel family")
      ->check(CLI::IsMember({"ad"}))
      ->capture_default_str();
  sweep->add_option("--eta-from", s.eta_from, "First decay value")
      ->capture_default_str();
  sweep->add_option("--eta-to", s.eta_to, "Last decay value")
      ->capture_default_str();
  sweep->add_option("--steps", s.steps, "Number of rows (>= 2)")
      ->capture_default_str();
  sweep->add_option("--out", s.out, "CSV output path")->required();
  sweep->add_option("--plot", s.plot, "Optional SVG plot path");
  sweep->add_option("--seed", s.seed, "Optimizer seed for fallback points")
      ->envname(kSeedEnvVar)
      ->capture_default_str();

  std::string example_out = "sdp_example_report.json";
  std::uint64_t example_seed = 1;
  CLI::App* sdp_example = app.add_subcommand(
      "sdp-example",
      "Distance-to-free-set of the built-in example, both variants");
  sdp_example->add_option("--out", example_out, "Structured report path")
      ->capture_default_str();
  sdp_example->add_option("--seed", example_seed, "Recorded in the manifest")
      ->envname(kSeedEnvVar)
      ->capture_default_str();

  DiscriminateArgs d;
  CLI::App* discriminate = app.add_subcommand(
      "discriminate", "Monte-Carlo two-channel discrimination game");
  discriminate->add_option("chan1", d.chan1, "First channel (file or built-in)")
      ->required();
  discriminate
      ->add_option("chan2", d.chan2, "Second channel (file or built-in)")
      ->required();
  discriminate->add_option("--trials", d.trials, "Number of game rounds")
      ->capture_default_str();
  discriminate->add_option("--seed", d.seed, "Game RNG seed")
      ->envname(kSeedEnvVar)
      ->capture_default_str();
  discriminate->add_flag("--no-reference", d.no_reference,
                         "Play without the entangled reference register");
  discriminate->add_option("--tol", d.tol, "Channel validation tolerance")
      ->capture_default_str();
  discriminate->add_option("--out", d.out, "Structured report path")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    m.measure_given = measure_opt->count() > 0;
    if (measure->parsed()) return run_measure(m);
    if (sweep->parsed()) return run_sweep(s);
    if (sdp_example->parsed()) return run_sdp_example(example_out, example_seed);
    if (discriminate->parsed()) return run_discriminate(d);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
