// polarkit: command-line front end for the non-binary polar coding toolkit.
//
// Subcommands: signalset, kernel, spectrum, bound, search, simulate,
// construct, fer. Output is JSON or CSV, to --out or stdout. Exit codes:
// 0 ok, 2 usage/validation error, 3 runtime refusal or I/O failure.
//
// A --config JSON file supplies defaults for any long option of the chosen
// subcommand; explicit flags win over the config, the config wins over
// built-in defaults. Unknown config keys are rejected.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polarkit/polarkit.hpp"

namespace {

using namespace polarkit;

// --- small parsing helpers ---

std::vector<double> parse_snr_grid(const std::string& spec) {
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double lo = 0.0, hi = 0.0, step = 0.0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
      throw CLI::ValidationError("--snr-db", "expected <lo>:<hi>:<step> with step > 0");
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
    return out;
  }
  std::istringstream is(spec);
  std::string token;
  while (std::getline(is, token, ','))
    if (!token.empty()) out.push_back(std::stod(token));
  if (out.empty()) throw CLI::ValidationError("--snr-db", "no SNR points given");
  return out;
}

std::vector<Symbol> parse_symbol_list(const std::string& spec, const char* flag) {
  std::vector<Symbol> out;
  std::istringstream is(spec);
  std::string token;
  try {
    while (std::getline(is, token, ','))
      if (!token.empty()) out.push_back(std::stoi(token));
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected a comma-separated integer list");
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json doc;
  in >> doc;
  return doc;
}

SignalSet resolve_set(const std::string& spec, std::optional<double> es) {
  if (spec.rfind("psk:", 0) == 0) {
    const int q = std::stoi(spec.substr(4));
    return psk(q, es.value_or(1.0));
  }
  if (spec == "quad-eq") return equidistant_quad(es.value_or(1.0));
  if (spec == "pam3-eq") {
    const SignalSet s = equidistant_pam3();
    return es ? normalize(s, *es) : s;
  }
  if (spec.rfind("rotated-quad:", 0) == 0) {
    const SignalSet s = rotated_quad(std::stod(spec.substr(13)));
    return es ? normalize(s, *es) : s;
  }
  // Anything else is a JSON file.
  SignalSet s = signal_set_from_json(load_json_file(spec));
  return es ? normalize(s, *es) : s;
}

// Shared kernel flags: exactly one of --standard / --pi / --rs-gamma /
// --kernel-file.
struct KernelFlags {
  bool standard = false;
  std::string pi;
  int rs_gamma = 0;
  std::string kernel_file;

  void add_to(CLI::App* cmd) {
    cmd->add_flag("--standard", standard, "use the standard kernel u1 + u2 mod q");
    cmd->add_option("--pi", pi,
                    "permutation image as a comma list (or 'identity') for the kernel "
                    "u1 + pi(u2) mod q");
    cmd->add_option("--rs-gamma", rs_gamma, "Reed-Solomon kernel u1 + gamma*u2 mod q");
    cmd->add_option("--kernel-file", kernel_file, "JSON file with {q, table}");
  }

  Kernel resolve(int q, std::ostream& notes) const {
    const int given = (standard ? 1 : 0) + (pi.empty() ? 0 : 1) + (rs_gamma != 0 ? 1 : 0) +
                      (kernel_file.empty() ? 0 : 1);
    if (given > 1)
      throw CLI::ValidationError("--pi", "give only one of --standard/--pi/--rs-gamma/"
                                         "--kernel-file");
    if (!kernel_file.empty()) {
      const Kernel k = kernel_from_json(load_json_file(kernel_file));
      if (k.q() != q) throw std::invalid_argument("kernel file q does not match the set");
      return k;
    }
    if (rs_gamma != 0) {
      if (!is_prime(rs_gamma))
        notes << "note: gamma=" << rs_gamma
              << " is not prime; any nonzero residue is accepted\n";
      return reed_solomon_kernel(q, rs_gamma);
    }
    if (!pi.empty() && pi != "identity")
      return permutation_kernel(q, Permutation(parse_symbol_list(pi, "--pi")));
    return standard_kernel(q);  // --standard, 'identity', or default
  }

  std::string describe() const {
    if (!kernel_file.empty()) return "file:" + kernel_file;
    if (rs_gamma != 0) return "rs-gamma:" + std::to_string(rs_gamma);
    if (!pi.empty()) return "pi:" + pi;
    return "standard";
  }
};

std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t seed_value) {
  if (seed_opt->count() > 0) return seed_value;
  if (const char* env = std::getenv("POLARKIT_SEED")) return std::stoull(env);
  return seed_value;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

// Applies --config defaults: for every key not already present on the
// command line, appends "--key value" tokens. Values must be scalars.
std::vector<std::string> inject_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size())
        throw CLI::ValidationError("--config", "missing file path");
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (config_path.empty()) return args;
  const json doc = load_json_file(config_path);
  if (!doc.is_object()) throw std::runtime_error("config file must hold a JSON object");
  for (const auto& item : doc.items()) {
    const std::string flag = "--" + item.key();
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;
    const json& v = item.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
    } else if (v.is_string()) {
      args.push_back(flag);
      args.push_back(v.get<std::string>());
    } else if (v.is_number()) {
      args.push_back(flag);
      std::ostringstream os;
      os << v;
      args.push_back(os.str());
    } else {
      throw std::runtime_error("config key '" + item.key() + "' must be a scalar");
    }
  }
  return args;
}

// --- subcommand state ---

struct CommonSim {
  std::string set_spec;
  std::optional<double> es;
  KernelFlags kernel;
  std::string snr_spec;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0x5eed;
  int threads = 0;
  std::uint64_t early_stop = 0;
  std::uint64_t chunk = 100000;
  std::string campaign = "campaign";
  std::string out;
  std::string json_out;
};

int run_cli(std::vector<std::string> args) {
  CLI::App app{"non-binary polar coding toolkit"};
  app.require_subcommand(1);

  // signalset ---------------------------------------------------------
  auto* cmd_set = app.add_subcommand("signalset", "emit a signal set as JSON");
  std::string ss_spec;
  std::optional<double> ss_es;
  std::string ss_out;
  cmd_set->add_option("--set", ss_spec, "psk:<q>, quad-eq, pam3-eq, rotated-quad:<x>, or JSON file")
      ->required();
  cmd_set->add_option("--es", ss_es, "target mean symbol energy");
  cmd_set->add_option("--out", ss_out, "output path (default stdout)");
  cmd_set->callback([&] {
    const SignalSet set = resolve_set(ss_spec, ss_es);
    emit(to_json(set).dump(2) + "\n", ss_out);
  });

  // kernel ------------------------------------------------------------
  auto* cmd_kernel = app.add_subcommand("kernel", "build a kernel and emit it as JSON");
  int kn_q = 0;
  KernelFlags kn_flags;
  std::string kn_out;
  cmd_kernel->add_option("--q", kn_q, "alphabet size")->required();
  kn_flags.add_to(cmd_kernel);
  cmd_kernel->add_option("--out", kn_out, "output path (default stdout)");
  cmd_kernel->callback([&] {
    std::ostringstream notes;
    const Kernel k = kn_flags.resolve(kn_q, notes);
    std::cerr << notes.str();
    json doc = to_json(k);
    doc["valid"] = k.validate();
    emit(doc.dump(2) + "\n", kn_out);
  });

  // spectrum ----------------------------------------------------------
  auto* cmd_spec = app.add_subcommand("spectrum", "distance spectrum of a synthetic channel");
  std::string sp_set;
  std::optional<double> sp_es;
  KernelFlags sp_kernel;
  std::string sp_role = "good";
  std::optional<int> sp_u1, sp_u2;
  bool sp_csv = false;
  bool sp_full = false;
  std::string sp_out;
  cmd_spec->add_option("--set", sp_set, "signal set spec")->required();
  cmd_spec->add_option("--es", sp_es, "target mean symbol energy");
  sp_kernel.add_to(cmd_spec);
  cmd_spec->add_option("--role", sp_role, "good or bad")
      ->check(CLI::IsMember({"good", "bad"}));
  cmd_spec->add_option("--u1", sp_u1, "reference u1 (default: report over all references)");
  cmd_spec->add_option("--u2", sp_u2, "reference u2");
  cmd_spec->add_flag("--csv", sp_csv, "emit CSV (d_over_sqrtEs,count) instead of JSON");
  cmd_spec->add_flag("--full", sp_full, "include every per-reference spectrum in the JSON");
  cmd_spec->add_option("--out", sp_out, "output path (default stdout)");
  cmd_spec->callback([&] {
    const SignalSet set = resolve_set(sp_set, sp_es);
    std::ostringstream notes;
    const Kernel kernel = sp_kernel.resolve(set.q(), notes);
    std::cerr << notes.str();
    const ChannelRole role = sp_role == "good" ? ChannelRole::good : ChannelRole::bad;
    if (sp_u1 || sp_u2) {
      const Symbol u1 = sp_u1.value_or(0);
      const Symbol u2 = sp_u2.value_or(0);
      const DistanceSpectrum s = role == ChannelRole::good
                                     ? good_spectrum(set, kernel, u1, u2)
                                     : bad_spectrum(set, kernel, u1, u2);
      if (sp_csv) {
        std::ostringstream os;
        write_spectrum_csv(os, s);
        emit(os.str(), sp_out);
      } else {
        emit(to_json(s).dump(2) + "\n", sp_out);
      }
      return;
    }
    const SpectrumReport rep = report(set, kernel, role);
    const DistanceSpectrum& worst = rep.worst(set.q());
    if (sp_csv) {
      std::ostringstream os;
      write_spectrum_csv(os, worst);
      emit(os.str(), sp_out);
      return;
    }
    json doc{{"role", sp_role},
             {"uniform", rep.uniform},
             {"worst_u1", rep.worst_u1},
             {"worst_u2", rep.worst_u2},
             {"d_min", worst.d_min()},
             {"spectrum", to_json(worst)}};
    if (sp_full) {
      json all = json::array();
      for (const DistanceSpectrum& s : rep.spectra) all.push_back(to_json(s));
      doc["references"] = all;
    }
    emit(doc.dump(2) + "\n", sp_out);
  });

  // bound -------------------------------------------------------------
  auto* cmd_bound = app.add_subcommand("bound", "union-bound curve as CSV");
  std::string bd_set;
  std::optional<double> bd_es;
  KernelFlags bd_kernel;
  std::string bd_role = "good";
  std::string bd_snr = "0:14:0.5";
  std::string bd_out;
  cmd_bound->add_option("--set", bd_set, "signal set spec")->required();
  cmd_bound->add_option("--es", bd_es, "target mean symbol energy");
  bd_kernel.add_to(cmd_bound);
  cmd_bound->add_option("--role", bd_role, "good or bad")
      ->check(CLI::IsMember({"good", "bad"}));
  cmd_bound->add_option("--snr-db", bd_snr, "grid <lo>:<hi>:<step> or comma list");
  cmd_bound->add_option("--out", bd_out, "output path (default stdout)");
  cmd_bound->callback([&] {
    const SignalSet set = resolve_set(bd_set, bd_es);
    std::ostringstream notes;
    const Kernel kernel = bd_kernel.resolve(set.q(), notes);
    std::cerr << notes.str();
    const ChannelRole role = bd_role == "good" ? ChannelRole::good : ChannelRole::bad;
    const SpectrumReport rep = report(set, kernel, role);
    const std::vector<double> snrs = parse_snr_grid(bd_snr);
    std::ostringstream os;
    write_bound_csv(os, rep.worst(set.q()), snrs);
    emit(os.str(), bd_out);
  });

  // search ------------------------------------------------------------
  auto* cmd_search = app.add_subcommand("search", "exhaustive permutation-kernel search");
  std::string se_set;
  std::optional<double> se_es;
  int se_threads = 0;
  bool se_all = false;
  std::string se_out;
  cmd_search->add_option("--set", se_set, "signal set spec")->required();
  cmd_search->add_option("--es", se_es, "target mean symbol energy");
  cmd_search->add_option("--threads", se_threads, "worker threads (0 = auto)");
  cmd_search->add_flag("--all-optima", se_all, "list every optimal permutation");
  cmd_search->add_option("--out", se_out, "output path (default stdout)");
  cmd_search->callback([&] {
    const SignalSet set = resolve_set(se_set, se_es);
    const SearchResult r = search_permutations(set, se_threads);
    json doc = to_json(r);
    if (!se_all) doc.erase("optima");
    doc["optima_count"] = r.optima.size();
    emit(doc.dump(2) + "\n", se_out);
  });

  // simulate ----------------------------------------------------------
  auto* cmd_sim = app.add_subcommand("simulate", "one-step synthetic channel Monte Carlo");
  CommonSim sim;
  std::string sim_channel = "good";
  bool sim_no_bounds = false;
  cmd_sim->add_option("--channel", sim_channel, "good or bad")
      ->check(CLI::IsMember({"good", "bad"}));
  cmd_sim->add_option("--set", sim.set_spec, "signal set spec")->required();
  cmd_sim->add_option("--es", sim.es, "target mean symbol energy");
  sim.kernel.add_to(cmd_sim);
  cmd_sim->add_option("--snr-db", sim.snr_spec, "grid <lo>:<hi>:<step> or comma list")
      ->required();
  cmd_sim->add_option("--trials", sim.trials, "trials per SNR point");
  auto* sim_seed_opt = cmd_sim->add_option("--seed", sim.seed, "campaign seed (fallback: POLARKIT_SEED)");
  cmd_sim->add_option("--threads", sim.threads, "worker threads (0 = auto)");
  cmd_sim->add_option("--early-stop-errors", sim.early_stop,
                      "stop a point after this many errors (0 = fixed trials)");
  cmd_sim->add_option("--chunk", sim.chunk, "early-stop evaluation chunk");
  cmd_sim->add_option("--campaign", sim.campaign, "campaign name for default file naming");
  cmd_sim->add_option("--out", sim.out,
                      "CSV path (default <campaign>.<role>.csv when --campaign is set, "
                      "else stdout)");
  cmd_sim->add_option("--json-out", sim.json_out, "also write the full JSON result here");
  cmd_sim->add_flag("--no-bounds", sim_no_bounds, "omit the union-bound column");
  cmd_sim->callback([&] {
    const SignalSet set = resolve_set(sim.set_spec, sim.es);
    std::ostringstream notes;
    const Kernel kernel = sim.kernel.resolve(set.q(), notes);
    std::cerr << notes.str();
    const std::vector<double> snrs = parse_snr_grid(sim.snr_spec);
    SimOptions opt;
    opt.trials = sim.trials;
    opt.seed = resolve_seed(sim_seed_opt, sim.seed);
    opt.threads = sim.threads;
    opt.early_stop_errors = sim.early_stop;
    opt.early_stop_chunk = sim.chunk;
    opt.campaign = sim.campaign;
    SimResult result = sim_channel == "good"
                           ? simulate_good_channel(set, kernel, snrs, opt)
                           : simulate_bad_channel(set, kernel, snrs, opt);
    result.metadata.kernel_desc = sim.kernel.describe();
    if (!sim_no_bounds) {
      const ChannelRole role =
          sim_channel == "good" ? ChannelRole::good : ChannelRole::bad;
      result = overlay_bounds(std::move(result), report(set, kernel, role).worst(set.q()));
    }
    std::ostringstream os;
    write_sim_csv(os, result);
    std::string out_path = sim.out;
    if (out_path.empty() && cmd_sim->count("--campaign") > 0)
      out_path = sim.campaign + "." + result.metadata.role + ".csv";
    emit(os.str(), out_path);
    if (!sim.json_out.empty()) emit(to_json(result).dump(2) + "\n", sim.json_out);
  });

  // construct ---------------------------------------------------------
  auto* cmd_con = app.add_subcommand("construct",
                                     "genie reliabilities and frozen-set construction");
  std::string co_set;
  std::optional<double> co_es;
  KernelFlags co_kernel;
  int co_n = 0;
  std::string co_stage = "channel-only";
  double co_snr = 10.0;
  std::uint64_t co_trials = 10000;
  std::uint64_t co_seed = 0x5eed;
  int co_threads = 0;
  std::optional<int> co_k;
  std::string co_out;
  std::string co_config_out;
  cmd_con->add_option("--set", co_set, "signal set spec")->required();
  cmd_con->add_option("--es", co_es, "target mean symbol energy");
  co_kernel.add_to(cmd_con);
  cmd_con->add_option("--n", co_n, "stage count (N = 2^n)")->required();
  cmd_con->add_option("--stage", co_stage, "kernel placement")
      ->check(CLI::IsMember({"uniform", "channel-only"}));
  cmd_con->add_option("--snr-db", co_snr, "construction SNR (Es/N0, dB)");
  cmd_con->add_option("--trials", co_trials, "genie trials");
  auto* co_seed_opt = cmd_con->add_option("--seed", co_seed, "seed (fallback: POLARKIT_SEED)");
  cmd_con->add_option("--threads", co_threads, "worker threads (0 = auto)");
  cmd_con->add_option("--K", co_k, "also emit a config with the N-K least reliable frozen");
  cmd_con->add_option("--out", co_out, "reliability CSV path (default stdout)");
  cmd_con->add_option("--config-out", co_config_out, "where to write the config JSON");
  cmd_con->callback([&] {
    const SignalSet set = resolve_set(co_set, co_es);
    std::ostringstream notes;
    const Kernel special = co_kernel.resolve(set.q(), notes);
    std::cerr << notes.str();
    const std::vector<Kernel> stages = co_stage == "uniform"
                                           ? uniform_stages(special, co_n)
                                           : channel_stage_only(special, co_n);
    PolarCodeConfig cfg = make_config(set, co_n, stages);
    const ChannelParams params(co_snr, set.es());
    const auto table = genie_reliabilities(cfg, params, co_trials,
                                           resolve_seed(co_seed_opt, co_seed), co_threads);
    std::ostringstream os;
    write_reliability_csv(os, table);
    emit(os.str(), co_out);
    if (co_k) {
      cfg.frozen = select_information_set(table, *co_k);
      emit(to_json(cfg).dump(2) + "\n", co_config_out);
    }
  });

  // fer ---------------------------------------------------------------
  auto* cmd_fer = app.add_subcommand("fer", "full-code frame error rate Monte Carlo");
  CommonSim fer;
  int fer_n = 0;
  int fer_k = 0;
  std::string fer_stage = "channel-only";
  std::uint64_t fer_ctrials = 2000;
  std::uint64_t fer_cseed = 0xc0de;
  std::string fer_frozen;
  cmd_fer->add_option("--set", fer.set_spec, "signal set spec")->required();
  cmd_fer->add_option("--es", fer.es, "target mean symbol energy");
  fer.kernel.add_to(cmd_fer);
  cmd_fer->add_option("--n", fer_n, "stage count (N = 2^n)")->required();
  cmd_fer->add_option("--K", fer_k, "information symbols per frame")->required();
  cmd_fer->add_option("--stage", fer_stage, "kernel placement")
      ->check(CLI::IsMember({"uniform", "channel-only"}));
  cmd_fer->add_option("--snr-db", fer.snr_spec, "grid <lo>:<hi>:<step> or comma list")
      ->required();
  cmd_fer->add_option("--trials", fer.trials, "frames per SNR point");
  auto* fer_seed_opt = cmd_fer->add_option("--seed", fer.seed, "campaign seed (fallback: POLARKIT_SEED)");
  cmd_fer->add_option("--threads", fer.threads, "worker threads (0 = auto)");
  cmd_fer->add_option("--early-stop-errors", fer.early_stop,
                      "stop a point after this many frame errors (0 = fixed trials)");
  cmd_fer->add_option("--chunk", fer.chunk, "early-stop evaluation chunk");
  cmd_fer->add_option("--construct-trials", fer_ctrials,
                      "genie trials for per-SNR construction (0 = fixed frozen set)");
  cmd_fer->add_option("--construct-seed", fer_cseed, "construction seed");
  cmd_fer->add_option("--frozen", fer_frozen, "fixed frozen indices (comma list)");
  cmd_fer->add_option("--campaign", fer.campaign, "campaign name for default file naming");
  cmd_fer->add_option("--out", fer.out, "CSV path (default <campaign>.fer.csv, else stdout)");
  cmd_fer->add_option("--json-out", fer.json_out, "also write the full JSON result here");
  cmd_fer->callback([&] {
    const SignalSet set = resolve_set(fer.set_spec, fer.es);
    std::ostringstream notes;
    const Kernel special = fer.kernel.resolve(set.q(), notes);
    std::cerr << notes.str();
    const std::vector<Kernel> stages = fer_stage == "uniform"
                                           ? uniform_stages(special, fer_n)
                                           : channel_stage_only(special, fer_n);
    std::vector<int> frozen;
    FerConstruction construction;
    if (!fer_frozen.empty()) {
      for (Symbol v : parse_symbol_list(fer_frozen, "--frozen")) frozen.push_back(v);
    } else {
      construction.construction_trials = fer_ctrials;
      construction.construction_seed = fer_cseed;
      if (fer_ctrials == 0)
        throw CLI::ValidationError("--construct-trials",
                                   "give --frozen or a positive --construct-trials");
    }
    const PolarCodeConfig cfg = make_config(set, fer_n, stages, std::move(frozen));
    const std::vector<double> snrs = parse_snr_grid(fer.snr_spec);
    SimOptions opt;
    opt.trials = fer.trials;
    opt.seed = resolve_seed(fer_seed_opt, fer.seed);
    opt.threads = fer.threads;
    opt.early_stop_errors = fer.early_stop;
    opt.early_stop_chunk = fer.chunk;
    opt.campaign = fer.campaign;
    SimResult result = simulate_fer(cfg, fer_k, snrs, opt, construction);
    result.metadata.kernel_desc = fer.kernel.describe() + " stage=" + fer_stage;
    std::ostringstream os;
    write_sim_csv(os, result);
    std::string out_path = fer.out;
    if (out_path.empty() && cmd_fer->count("--campaign") > 0)
      out_path = fer.campaign + ".fer.csv";
    emit(os.str(), out_path);
    if (!fer.json_out.empty()) emit(to_json(result).dump(2) + "\n", fer.json_out);
  });

  try {
    args = inject_config(std::move(args));
    std::vector<const char*> argv;
    argv.push_back("polarkit");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(std::move(args));
}
