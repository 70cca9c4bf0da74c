#include "collapse/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"

#include "collapse/checks.hpp"
#include "collapse/decoherence.hpp"
#include "collapse/emergent.hpp"
#include "collapse/error.hpp"
#include "collapse/io.hpp"
#include "collapse/jumps.hpp"
#include "collapse/noise.hpp"
#include "collapse/parallel.hpp"
#include "collapse/pointer.hpp"
#include "collapse/pressure.hpp"
#include "collapse/rng.hpp"
#include "collapse/trajectories.hpp"

namespace collapse::cli {

namespace {

namespace fs = std::filesystem;
using io::Cell;
using io::Column;
using io::KeyValues;
using Json = nlohmann::ordered_json;

const KeyValues kProbeDefaults{{"M", "1"},     {"R", "1"},    {"lambda", "0.5"}, {"hbar", "1"},
                               {"G", "1"},     {"seed", "1"}, {"format", "csv"}, {"stride", "1"}};

KeyValues with_probe(KeyValues extra) {
  KeyValues kv = kProbeDefaults;
  for (auto& [k, v] : extra) kv[k] = v;
  return kv;
}

const std::map<std::string, KeyValues>& defaults() {
  static const std::map<std::string, KeyValues> table{
      {"pointer", with_probe({{"n", "1"}, {"T", "10"}, {"dt", "0.005"}, {"grid_points", "256"},
                              {"grid_widths", "40"}, {"sigma0_sq", "0"}, {"stride", "20"}})},
      {"jump", with_probe({{"n", "1"}, {"T", "10"}, {"dt", "0.005"}, {"grid_points", "256"},
                           {"grid_widths", "40"}, {"stride", "20"}})},
      {"trajectory", with_probe({{"n", "1000"}, {"T", "10"}, {"dt", "0.01"}, {"samples", "10"}})},
      {"two-probe", with_probe({{"pairs", "1000"}, {"T", "20"}, {"dt", "0.01"}, {"d", "4"}, {"window", "0.1"},
                                {"feedback", "mean_field"}, {"noise", "independent"}, {"quasi_static", "1"},
                                {"npd", "16"}})},
      {"decoherence", with_probe({{"d_min", "0.25"}, {"d_max", "8"}, {"d_count", "32"}, {"lattice_h", "0"}})},
      {"pressure", KeyValues{{"n_gas", "0.001"}, {"m", "0.001"}, {"T_gas", "1"}, {"M", "1"}, {"R", "1"},
                             {"duration", "100000"}, {"collisions_file", "0"}, {"batches", "32"},
                             {"seed", "1"}, {"format", "csv"}}},
      {"noise-check", with_probe({{"npd", "8,16"}, {"dt", "0.01"}, {"samples", "2000"}})},
  };
  return table;
}

struct Context {
  std::string subcommand;
  KeyValues config;
  io::Format format = io::Format::csv;
  fs::path out;
  std::uint64_t seed = 1;
  std::vector<std::string> outputs;
  std::ostream* log = nullptr;

  double num(const std::string& key) const { return io::get_double(config, key); }
  long long integer(const std::string& key) const { return io::get_int(config, key); }
  std::size_t count(const std::string& key) const {
    const long long v = integer(key);
    if (v < 0) throw Error(ErrorKind::invalid_parameter, key + " must be non-negative");
    return static_cast<std::size_t>(v);
  }
  double positive(const std::string& key) const {
    const double v = num(key);
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(key == "dt" ? ErrorKind::invalid_step : ErrorKind::invalid_parameter,
                  key + " must be positive, got " + config.at(key));
    return v;
  }
  fs::path path(const std::string& suffix = "") const { return suffix.empty() ? out : io::sibling(out, suffix); }
  std::unique_ptr<io::TableWriter> table(std::vector<Column> columns, const std::string& suffix = "") {
    auto w = std::make_unique<io::TableWriter>(path(suffix), format, std::move(columns));
    outputs.push_back(w->path().string());
    return w;
  }
  ProbeParams probe() const {
    return make_probe_params(num("M"), num("R"), num("lambda"), UnitSystem{num("hbar"), num("G")});
  }
};

std::size_t steps_for(double T, double dt) {
  const double ratio = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw Error(ErrorKind::invalid_step, "T must be a positive integer multiple of dt");
  return steps;
}

void run_pointer(Context& ctx) {
  const auto p = ctx.probe();
  const double T = ctx.positive("T"), dt = ctx.positive("dt");
  const std::size_t n = ctx.count("n"), stride = std::max<std::size_t>(1, ctx.count("stride"));
  const auto steps = steps_for(T, dt);
  const auto grid = pointer::default_grid(p, ctx.count("grid_points"), ctx.positive("grid_widths"));
  const double sigma0_sq = ctx.num("sigma0_sq");
  const pointer::GridSseStepper stepper(p, grid, dt);
  std::vector<std::vector<std::vector<Cell>>> rows(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    NoiseStream stream(ctx.seed, stream_id(purpose::grid, i));
    auto wf = sigma0_sq > 0.0
                  ? gaussian_on_grid(grid.n, grid.dx, 0.0, 0.0, 0.0, Complex(0.25 / sigma0_sq, 0.0), p.hbar())
                  : pointer::equilibrium_on_grid(p, grid);
    auto record = [&](double t, double drift) {
      const auto m = moments(wf, p.hbar());
      rows[i].push_back({static_cast<long long>(i), t, m.xbar, m.pbar, m.sigma_sq, drift});
    };
    record(0.0, 0.0);
    const double sd = std::sqrt(p.D_p * dt);
    for (std::size_t k = 1; k <= steps; ++k) {
      const auto diag = stepper.step(wf, sd * stream.normal());
      if (k % stride == 0 || k == steps) record(static_cast<double>(k) * dt, diag.norm_drift);
    }
  });
  auto w = ctx.table({{"traj", ""}, {"t", "time"}, {"xbar", "length"}, {"pbar", "momentum"},
                      {"sigma_sq", "length^2"}, {"norm_drift", ""}});
  for (const auto& traj : rows)
    for (const auto& r : traj) w->row(r);
}

void run_jump(Context& ctx) {
  const auto p = ctx.probe();
  const double T = ctx.positive("T"), dt = ctx.positive("dt");
  const std::size_t n = ctx.count("n"), stride = std::max<std::size_t>(1, ctx.count("stride"));
  steps_for(T, dt);
  const auto grid = pointer::default_grid(p, ctx.count("grid_points"), ctx.positive("grid_widths"));
  const auto initial = pointer::equilibrium_on_grid(p, grid);
  std::vector<jumps::JumpTrajectory> runs(n);
  parallel::for_each_index(n, [&](std::size_t i) {
    NoiseStream stream(ctx.seed, stream_id(purpose::jump, i));
    runs[i] = jumps::simulate_jump_trajectory(initial, T, dt, stream, p, stride);
  });
  auto w = ctx.table({{"traj", ""}, {"t", "time"}, {"xbar", "length"}, {"pbar", "momentum"}, {"sigma_sq", "length^2"}});
  auto ev = ctx.table({{"traj", ""}, {"jump", ""}, {"t", "time"}, {"integrated_rate", ""}}, "jumps");
  auto sum = ctx.table({{"traj", ""}, {"jump_count", ""}, {"mean_waiting_time", "time"}}, "summary");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = runs[i];
    const auto id = static_cast<long long>(i);
    for (std::size_t k = 0; k < r.times.size(); ++k)
      w->row({id, r.times[k], r.moments[k].xbar, r.moments[k].pbar, r.moments[k].sigma_sq});
    for (std::size_t k = 0; k < r.jump_times.size(); ++k)
      ev->row({id, static_cast<long long>(k), r.jump_times[k], r.integrated_rates[k]});
    sum->row({id, static_cast<long long>(r.jump_count), r.mean_waiting_time()});
  }
}

void run_trajectory(Context& ctx) {
  const auto p = ctx.probe();
  trajectories::EnsembleOptions eo;
  eo.n = ctx.count("n");
  eo.T = ctx.positive("T");
  eo.dt = ctx.positive("dt");
  eo.seed = ctx.seed;
  eo.samples = ctx.count("samples");
  const auto reports = trajectories::ensemble_run(eo, p);
  std::vector<Column> cols{{"t", "time"}};
  const char* axes[] = {"x", "y", "z"};
  for (const char* q : {"var_p", "var_x", "cov_xp"}) {
    const char* unit = std::string(q) == "var_p" ? "momentum^2" : (std::string(q) == "var_x" ? "length^2" : "length*momentum");
    for (const char* a : axes) cols.push_back({std::string(q) + "_" + a, unit});
    for (const char* a : axes) cols.push_back({std::string(q) + "_" + a + "_stderr", unit});
  }
  auto w = ctx.table(cols);
  for (const auto& r : reports) {
    std::vector<Cell> row{r.t};
    for (const auto* q : {&r.var_p, &r.var_x, &r.cov_xp}) {
      for (int k = 0; k < 3; ++k) row.push_back((*q)[k].value);
      for (int k = 0; k < 3; ++k) row.push_back((*q)[k].std_err);
    }
    w->row(row);
  }
}

emergent::Feedback parse_feedback(const std::string& s) {
  if (s == "none") return emergent::Feedback::none;
  if (s == "mean_field") return emergent::Feedback::mean_field;
  throw Error(ErrorKind::invalid_parameter, "feedback must be none or mean_field, got '" + s + "'");
}

emergent::NoiseCorrelation parse_noise(const std::string& s) {
  if (s == "independent") return emergent::NoiseCorrelation::independent;
  if (s == "field_kernel") return emergent::NoiseCorrelation::field_kernel;
  throw Error(ErrorKind::invalid_parameter, "noise must be independent or field_kernel, got '" + s + "'");
}

void run_two_probe(Context& ctx) {
  const auto p = ctx.probe();
  const double T = ctx.positive("T"), dt = ctx.positive("dt");
  auto config = emergent::make_pair_config(p, ctx.positive("d"), ctx.count("pairs"));
  config.window = ctx.positive("window");
  config.feedback = parse_feedback(ctx.config.at("feedback"));
  config.noise_correlation = parse_noise(ctx.config.at("noise"));
  config.quasi_static = io::get_bool(ctx.config, "quasi_static");
  config.nodes_per_diameter = static_cast<int>(ctx.integer("npd"));
  const auto records = emergent::simulate_two_probe(config, T, dt, ctx.seed);
  auto w = ctx.table({{"t", "time"}, {"d", "length"}, {"relative_drift", "force"}, {"stderr", "force"},
                      {"total_drift", "force"}, {"total_stderr", "force"}, {"pairs", ""}});
  const auto windows = emergent::summarize_windows(records);
  std::size_t alive = 0;
  for (const auto& a : records.abort_time) alive += a ? 0 : 1;
  for (const auto& s : windows)
    w->row({s.t, s.d, s.relative_drift.value, s.relative_drift.std_err, s.total_drift.value, s.total_drift.std_err,
            static_cast<long long>(alive)});
  const auto rep = emergent::estimate_effective_G(records, config);
  auto r = ctx.table({{"G_eff", "G units"}, {"stderr", "G units"}, {"n_trajectories", ""}, {"fit_t0", "time"},
                      {"fit_t1", "time"}, {"target_2_lambda_G", "G units"}, {"G", "G units"},
                      {"total_drift", "force"}, {"total_drift_stderr", "force"}},
                     "report");
  r->row({rep.G_eff, rep.std_err, static_cast<long long>(rep.n_trajectories), rep.fit_t0, rep.fit_t1, rep.target,
          rep.G, rep.total_drift.value, rep.total_drift.std_err});
  *ctx.log << "G_eff = " << io::format_double(rep.G_eff) << " +- " << io::format_double(rep.std_err)
           << " (2 lambda G = " << io::format_double(rep.target) << ")\n";
}

void run_decoherence(Context& ctx) {
  const auto p = ctx.probe();
  const double d_min = ctx.num("d_min"), d_max = ctx.num("d_max");
  const std::size_t count = ctx.count("d_count");
  const double h = ctx.num("lattice_h");
  if (!(d_min >= 0.0) || !(d_max >= d_min) || count == 0)
    throw Error(ErrorKind::invalid_parameter, "need 0 <= d_min <= d_max and d_count >= 1");
  if (h < 0.0) throw Error(ErrorKind::invalid_parameter, "lattice_h must be non-negative");
  std::vector<Column> cols{{"d", "length"}, {"norm_sq", "energy"}, {"gamma", "1/time"}};
  if (h > 0.0) {
    cols.push_back({"norm_sq_lattice", "energy"});
    cols.push_back({"gamma_lattice", "1/time"});
  }
  std::vector<std::vector<Cell>> rows(count);
  parallel::for_each_index(count, [&](std::size_t i) {
    const double d = count == 1 ? d_min : d_min + (d_max - d_min) * static_cast<double>(i) / (count - 1);
    const decoherence::UniformBall a{Vec3::Zero(), p.M, p.R}, b{Vec3(d, 0, 0), p.M, p.R};
    const double norm = decoherence::dp_norm_sq(a, b, p.units);
    rows[i] = {d, norm, decoherence::decoherence_rate(d, p)};
    if (h > 0.0) {
      const double lat = d == 0.0 ? 0.0 : decoherence::dp_norm_sq_lattice(a, b, h, p.units);
      rows[i].push_back(lat);
      rows[i].push_back(p.lambda / (2.0 * p.hbar()) * lat);
    }
  });
  auto w = ctx.table(cols);
  for (const auto& r : rows) w->row(r);
}

void run_pressure(Context& ctx) {
  pressure::GasConfig gas;
  gas.n = ctx.num("n_gas");
  gas.m = ctx.num("m");
  gas.T_gas = ctx.num("T_gas");
  gas.M = ctx.num("M");
  gas.R = ctx.num("R");
  gas.duration = ctx.num("duration");
  pressure::validate(gas);
  const auto traj = pressure::simulate_gas_brownian(gas, ctx.seed);
  const auto P = pressure::pressure_estimator(traj.records, gas, ctx.count("batches"));
  auto w = ctx.table({{"pressure", "energy/length^3"}, {"stderr", "energy/length^3"}, {"n_collisions", ""},
                      {"collision_rate", "1/time"}, {"n_T_gas", "energy/length^3"},
                      {"kinetic_energy_per_axis", "energy"}, {"regime_violation", ""}});
  w->row({P.value, P.std_err, static_cast<long long>(traj.records.size()), pressure::collision_rate(gas),
          gas.n * gas.T_gas, pressure::kinetic_energy_per_axis(traj, gas, 0.5 * gas.duration),
          static_cast<long long>(traj.warnings.empty() ? 0 : 1)});
  for (const auto& msg : traj.warnings) *ctx.log << "warning: " << msg << "\n";
  if (io::get_bool(ctx.config, "collisions_file")) {
    auto c = ctx.table({{"t", "time"}, {"nx", ""}, {"ny", ""}, {"nz", ""}, {"vx", "velocity"}, {"vy", "velocity"},
                        {"vz", "velocity"}, {"dvx", "velocity"}, {"dvy", "velocity"}, {"dvz", "velocity"}},
                       "collisions");
    for (const auto& r : traj.records)
      c->row({r.time, r.normal.x(), r.normal.y(), r.normal.z(), r.molecule_in.x(), r.molecule_in.y(),
              r.molecule_in.z(), r.dv.x(), r.dv.y(), r.dv.z()});
  }
}

void run_noise_check(Context& ctx) {
  const auto p = ctx.probe();
  const double dt = ctx.positive("dt");
  const std::size_t samples = ctx.count("samples");
  const double target = p.D_p / dt;
  auto w = ctx.table({{"npd", ""}, {"h", "length"}, {"component", ""}, {"var_exact_over_Dp", ""},
                      {"var_sampled_over_Dp", ""}, {"sampled_stderr", ""}});
  for (double v : io::get_double_list(ctx.config, "npd")) {
    const int npd = static_cast<int>(v);
    const auto lattice = noise::ball_lattice(Vec3::Zero(), p.R, npd);
    const noise::BallForceOperator op(lattice, Vec3::Zero(), p);
    const auto exact = noise::ball_force_covariance({op}, p, dt);
    std::array<stats::Estimate, 3> sampled;
    sampled.fill({std::nan(""), std::nan("")});
    // Dense factorization only for lattices small enough to factor quickly.
    if (samples >= 2 && lattice.size() <= 4096) {
      const noise::FieldSampler sampler(lattice, p, dt);
      NoiseStream stream(ctx.seed, stream_id(purpose::lattice, static_cast<std::uint64_t>(npd)));
      const Eigen::MatrixXd values = sampler.sample_values(stream, samples);
      Eigen::MatrixXd sub(static_cast<Eigen::Index>(op.support().size()), values.cols());
      for (std::size_t j = 0; j < op.support().size(); ++j)
        sub.row(static_cast<Eigen::Index>(j)) = values.row(static_cast<Eigen::Index>(op.support()[j]));
      const Eigen::MatrixXd f = op.coefficients() * sub;
      for (int k = 0; k < 3; ++k) {
        std::vector<double> sq(static_cast<std::size_t>(f.cols()));
        for (Eigen::Index c = 0; c < f.cols(); ++c) sq[static_cast<std::size_t>(c)] = f(k, c) * f(k, c) / target;
        sampled[static_cast<std::size_t>(k)] = stats::mean_of(sq);
      }
    }
    for (int k = 0; k < 3; ++k)
      w->row({static_cast<long long>(npd), lattice.h, static_cast<long long>(k), exact(k, k) / target,
              sampled[static_cast<std::size_t>(k)].value, sampled[static_cast<std::size_t>(k)].std_err});
  }
}

const std::map<std::string, std::function<void(Context&)>>& runners() {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"pointer", run_pointer},         {"jump", run_jump},         {"trajectory", run_trajectory},
      {"two-probe", run_two_probe},     {"decoherence", run_decoherence}, {"pressure", run_pressure},
      {"noise-check", run_noise_check}};
  return table;
}

void write_manifest(const Context& ctx, const Json& extra, double seconds) {
  Json m;
  m["artifact"] = "collapse-lab";
  m["version"] = COLLAPSE_LAB_VERSION;
  m["subcommand"] = ctx.subcommand;
  m["config"] = Json::object();
  for (const auto& [k, v] : ctx.config) m["config"][k] = v;
  m["seed"] = ctx.seed;
  m["output"] = ctx.out.string();
  m["outputs"] = ctx.outputs;
  m["workers"] = parallel::workers();
  m["wall_clock_seconds"] = seconds;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  const fs::path path = ctx.out.string() + ".manifest.json";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << m.dump(2) << '\n';
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"pointer", "jump", "trajectory", "two-probe",
                                              "decoherence", "pressure", "noise-check"};
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical laboratory for gravity-related wave-function collapse", "collapse-lab"};
  app.set_version_flag("--version", COLLAPSE_LAB_VERSION);
  app.require_subcommand(1);

  struct Flags {
    std::string config_file, out, format;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<long long> stride;
    unsigned workers = 0;
    bool check = false;
    double check_scale = 0.1;
  };
  std::map<std::string, Flags> flags;
  const std::map<std::string, std::string> blurbs{
      {"pointer", "single-probe stochastic Schroedinger evolution on a grid"},
      {"jump", "jump unraveling with waiting-time statistics"},
      {"trajectory", "ensemble moment trajectories for free probes"},
      {"two-probe", "two-probe ensemble and effective coupling fit"},
      {"decoherence", "decoherence rate versus separation"},
      {"pressure", "gas-kinetic Brownian analogue and pressure estimate"},
      {"noise-check", "lattice force covariance against the continuum value"}};
  for (const auto& name : subcommands()) {
    auto* sub = app.add_subcommand(name, blurbs.at(name));
    auto& f = flags[name];
    sub->add_option("--config", f.config_file, "key=value file or a run manifest");
    sub->add_option("--set", f.sets, "override one config key (key=value); repeatable");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--workers", f.workers, "worker threads ($COLLAPSE_LAB_WORKERS takes precedence)");
    sub->add_option("--out", f.out, "data file path; siblings and the manifest are written next to it");
    sub->add_option("--format", f.format, "csv or jsonl");
    sub->add_option("--stride", f.stride, "record every stride-th step");
    sub->add_flag("--check", f.check, "run this subcommand's acceptance checks at reduced size");
    sub->add_option("--check-scale", f.check_scale, "ensemble-size factor for --check");
  }

  std::vector<std::string> argv_store{"collapse-lab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << COLLAPSE_LAB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Context ctx;
  ctx.subcommand = app.get_subcommands().front()->get_name();
  ctx.log = &out;
  const Flags& f = flags[ctx.subcommand];
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  try {
    ctx.config = defaults().at(ctx.subcommand);
    auto merge = [&](const KeyValues& kv, const std::string& origin) {
      for (const auto& [k, v] : kv) {
        if (!ctx.config.count(k))
          throw Error(ErrorKind::invalid_parameter,
                      "unknown config key '" + k + "' for " + ctx.subcommand + " (from " + origin + ")");
        ctx.config[k] = v;
      }
    };
    if (!f.config_file.empty()) merge(io::read_config_file(f.config_file), f.config_file);
    for (const auto& s : f.sets) merge(io::parse_key_values(s), "--set");
    if (f.seed) ctx.config["seed"] = std::to_string(*f.seed);
    if (f.stride) {
      if (!ctx.config.count("stride"))
        throw Error(ErrorKind::invalid_parameter, "--stride does not apply to " + ctx.subcommand);
      ctx.config["stride"] = std::to_string(*f.stride);
    }
    if (!f.format.empty()) ctx.config["format"] = f.format;
    ctx.format = io::parse_format(ctx.config.at("format"));
    ctx.seed = static_cast<std::uint64_t>(io::get_int(ctx.config, "seed"));
    ctx.out = f.out.empty() ? fs::path(ctx.subcommand + (f.check ? "-check" : "") + io::format_extension(ctx.format))
                            : fs::path(f.out);
    if (f.workers > 0) parallel::set_workers(f.workers);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (ctx.out.empty()) ctx.out = ctx.subcommand + ".csv";
    write_manifest(ctx, {{"status", "error"}, {"exit_code", kExitValidation},
                         {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}},
                   elapsed());
    return kExitValidation;
  }

  try {
    if (f.check) {
      if (!(f.check_scale > 0.0)) throw Error(ErrorKind::invalid_parameter, "--check-scale must be positive");
      const auto results = checks::for_subcommand(ctx.subcommand, {f.check_scale, ctx.seed});
      auto w = ctx.table({{"criterion", ""}, {"name", ""}, {"pass", ""}, {"detail", ""}});
      Json list = Json::array();
      bool all = true;
      for (const auto& r : results) {
        w->row({static_cast<long long>(r.criterion), r.name, static_cast<long long>(r.pass ? 1 : 0), r.detail});
        list.push_back({{"criterion", r.criterion}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        out << (r.pass ? "PASS" : "FAIL") << " [" << r.criterion << "] " << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
      }
      w.reset();
      const int code = all ? kExitOk : kExitCheckFailed;
      write_manifest(ctx, {{"status", all ? "ok" : "checks-failed"}, {"exit_code", code}, {"checks", list}}, elapsed());
      return code;
    }
    runners().at(ctx.subcommand)(ctx);
    for (const auto& o : ctx.outputs) out << "wrote " << o << "\n";
    write_manifest(ctx, {{"status", "ok"}, {"exit_code", kExitOk}}, elapsed());
    return kExitOk;
  } catch (const Error& e) {
    const int code = is_validation_error(e.kind()) ? kExitValidation : kExitRegime;
    err << "error: " << e.what() << "\n";
    write_manifest(ctx, {{"status", "error"}, {"exit_code", code},
                         {"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}},
                   elapsed());
    return code;
  }
}

}  // namespace collapse::cli
