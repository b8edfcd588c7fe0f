#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftnisac/ambiguity.hpp"
#include "ftnisac/capacity.hpp"
#include "ftnisac/errors.hpp"
#include "ftnisac/experiments.hpp"
#include "ftnisac/isi.hpp"
#include "ftnisac/pulse.hpp"

namespace ftnisac::cli {

namespace {
using json = nlohmann::json;
using cplx = std::complex<double>;

// ---------------------------------------------------------------- parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) {
    throw std::invalid_argument("malformed number '" + s + "'");
  }
  return v;
}

/// "a:b:step" inclusive range (half-step slack at the top) or a single value.
std::vector<double> parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) return {parse_number(parts[0])};
  if (parts.size() != 3) {
    throw std::invalid_argument("range '" + s + "' is not a:b:step");
  }
  const double a = parse_number(parts[0]);
  const double b = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0) || b < a) {
    throw std::invalid_argument("range '" + s + "' must have b >= a, step > 0");
  }
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((b - a) / step + 1e-9));
  out.reserve(n + 1);
  for (int i = 0; i <= n; ++i) out.push_back(a + i * step);
  return out;
}

/// Complex literal: "a", "bj", "a+bj", "a-bj" (exponent forms allowed).
cplx parse_complex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty complex literal");
  if (s.back() != 'j') return {parse_number(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not leading and not part of an exponent
  std::size_t cut = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' &&
        body[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  const auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_number(t);
  };
  if (cut == std::string::npos) return {0.0, imag_of(body)};
  return {parse_number(body.substr(0, cut)), imag_of(body.substr(cut))};
}

/// "h1@tau1,h2@tau2,..." with complex gains.
MultipathChannel parse_channel(const std::string& s) {
  std::vector<PathGain> paths;
  for (const auto& tok : split(s, ',')) {
    const auto at = tok.find('@');
    if (at == std::string::npos) {
      throw std::invalid_argument("channel path '" + tok +
                                  "' is not gain@delay");
    }
    paths.push_back(
        {parse_complex(tok.substr(0, at)), parse_number(tok.substr(at + 1))});
  }
  return MultipathChannel::from_paths(std::move(paths));
}

std::vector<DopplerTarget> parse_targets(const std::string& s) {
  std::vector<DopplerTarget> targets;
  for (const auto& tok : split(s, ',')) {
    const auto at = tok.find('@');
    if (at == std::string::npos) {
      throw std::invalid_argument("target '" + tok +
                                  "' is not reflectivity@doppler");
    }
    targets.push_back(
        {parse_number(tok.substr(0, at)), parse_number(tok.substr(at + 1))});
  }
  return targets;
}

Constellation parse_constellation(const std::string& name) {
  if (name == "qpsk") return Constellation::qpsk();
  if (name == "8psk") return Constellation::psk8();
  if (name == "16qam") return Constellation::qam16();
  if (name == "64qam") return Constellation::qam64();
  if (name == "gaussian") return Constellation::gaussian();
  throw std::invalid_argument("unknown constellation '" + name + "'");
}

// ---------------------------------------------------------------- output

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string xi_tag(double xi) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", xi);
  return buf;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::string render() const {
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c) out += ',';
      out += csv_quote(header[c]);
    }
    out += "\r\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += csv_quote(format_value(columns[c][r]));
      }
      out += "\r\n";
    }
    return out;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

struct RunContext {
  std::string command;
  std::uint64_t seed = 0;
  int threads = 1;
  json config;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void emit(const std::string& out_path, const CsvTable& table) const {
    write_file(out_path, table.render());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = seed;
    manifest["threads"] = threads;
    manifest["wall_clock_s"] = wall;
    manifest["outputs"] = json::array({out_path});
    manifest["config"] = config;
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  }
};

// ---------------------------------------------------------------- options

struct PulseOptions {
  std::string family = "rrc";
  double beta = 0.3;
  double period = 1.0;

  PulseSpec make() const {
    if (family == "rrc") return PulseSpec::rrc(beta, period);
    if (family == "sinc") return PulseSpec::sinc(period);
    throw std::invalid_argument("unknown pulse family '" + family + "'");
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--pulse", family, "shaping pulse family: rrc|sinc")
        ->check(CLI::IsMember({"rrc", "sinc"}));
    cmd->add_option("--beta", beta, "roll-off factor in [0, 1]");
    cmd->add_option("--T", period, "orthogonal symbol period in seconds");
  }

  json to_json() const {
    return {{"pulse", family}, {"beta", beta}, {"T", period}};
  }
};

void check_compressions(const std::vector<double>& xis) {
  if (xis.empty()) throw std::invalid_argument("no compression factors given");
  for (double xi : xis) {
    if (!(xi > 0.0 && xi <= 1.0)) {
      throw std::invalid_argument("compression factor " + std::to_string(xi) +
                                  " outside (0, 1]");
    }
  }
}

int fair_count(int n_nyquist, double xi) {
  return std::max(1, static_cast<int>(std::lround(n_nyquist / xi)));
}

// ---------------------------------------------------------------- commands

struct SpectrumCmd {
  PulseOptions pulse;
  std::vector<double> xis = {0.6, 0.75, 0.9, 1.0};
  std::string grid = "-1:1:0.0025";
  std::string out = "spectrum.csv";

  int execute(RunContext ctx) const {
    check_compressions(xis);
    const auto p = pulse.make();
    const auto f_grid = parse_range(grid);

    CsvTable table;
    table.header = {"f_hz", "hp2_s"};
    table.columns.resize(2 + 2 * xis.size());
    for (double f : f_grid) {
      table.columns[0].push_back(f);
      table.columns[1].push_back(spectrum_sq(p, f));
    }
    for (std::size_t i = 0; i < xis.size(); ++i) {
      table.header.push_back("hfo2_s_xi" + xi_tag(xis[i]));
      table.header.push_back("htfo2_s_xi" + xi_tag(xis[i]));
      for (double f : f_grid) {
        table.columns[2 + 2 * i].push_back(
            folded_spectrum_sq(p, xis[i], f, FoldedSpectrumKind::folded));
        table.columns[3 + 2 * i].push_back(
            folded_spectrum_sq(p, xis[i], f, FoldedSpectrumKind::twisted));
      }
    }

    ctx.config = pulse.to_json();
    ctx.config["xi"] = xis;
    ctx.config["grid"] = grid;
    ctx.config["out"] = out;
    ctx.emit(out, table);
    return 0;
  }
};

struct SeCmd {
  PulseOptions pulse;
  std::vector<double> xis = {1.0, 0.75};
  std::string snr = "0:20:1";
  std::string channel = "0.5773502691896258@0,0.5773502691896258@0.2,"
                        "0.5773502691896258@0.5";
  bool ergodic = false;
  int paths = 3;
  double tau_max = 2.0;
  int trials = 2000;
  std::uint64_t seed = 1;
  int check_matrix = 0;
  bool cyclic = true;
  std::string out = "se.csv";

  int execute(RunContext ctx) const {
    check_compressions(xis);
    const auto p = pulse.make();
    const auto snr_db = parse_range(snr);

    CsvTable table;
    table.header = {"snr_db"};
    table.columns.emplace_back(snr_db);

    if (ergodic) {
      const ChannelModel model{paths, tau_max};
      for (double xi : xis) {
        const auto tag = xi_tag(xi);
        table.header.push_back("ergodic_rate_bps_hz_xi" + tag);
        table.header.push_back("ergodic_rate_ub_bps_hz_xi" + tag);
        table.header.push_back("ergodic_rate_lb_bps_hz_xi" + tag);
        std::vector<double> r;
        std::vector<double> ub;
        std::vector<double> lb;
        for (double s : snr_db) {
          const auto e = ergodic_se_bounds(p, xi, model,
                                           std::pow(10.0, s / 10.0), trials,
                                           seed);
          r.push_back(e.rate);
          ub.push_back(e.rate_ub);
          lb.push_back(e.rate_lb);
        }
        table.columns.push_back(std::move(r));
        table.columns.push_back(std::move(ub));
        table.columns.push_back(std::move(lb));
      }
    } else {
      const auto ch = parse_channel(channel);
      for (double xi : xis) {
        const auto tag = xi_tag(xi);
        table.header.push_back("rate_bps_hz_xi" + tag);
        table.header.push_back("rate_ub_bps_hz_xi" + tag);
        table.header.push_back("rate_lb_bps_hz_xi" + tag);
        std::vector<double> r;
        std::vector<double> ub;
        std::vector<double> lb;
        std::vector<double> mr;
        for (double s : snr_db) {
          const double lin = std::pow(10.0, s / 10.0);
          r.push_back(spectral_efficiency(p, xi, ch, lin));
          const auto b = se_bounds(p, xi, ch, lin);
          ub.push_back(b.rate_ub);
          lb.push_back(b.rate_lb);
          if (check_matrix > 0) {
            mr.push_back(
                mutual_info_matrix(p, xi, ch, lin, check_matrix, cyclic));
          }
        }
        table.columns.push_back(std::move(r));
        table.columns.push_back(std::move(ub));
        table.columns.push_back(std::move(lb));
        if (check_matrix > 0) {
          table.header.push_back("matrix_rate_bps_hz_xi" + tag);
          table.columns.push_back(std::move(mr));
        }
      }
    }

    ctx.config = pulse.to_json();
    ctx.config["xi"] = xis;
    ctx.config["snr_db"] = snr;
    ctx.config["ergodic"] = ergodic;
    if (ergodic) {
      ctx.config["paths"] = paths;
      ctx.config["tau_max"] = tau_max;
      ctx.config["trials"] = trials;
    } else {
      ctx.config["channel"] = channel;
      if (check_matrix > 0) {
        ctx.config["check_matrix"] = check_matrix;
        ctx.config["cyclic"] = cyclic;
      }
    }
    ctx.config["out"] = out;
    ctx.emit(out, table);
    return 0;
  }
};

struct AfCmd {
  PulseOptions pulse;
  std::string axis;
  std::vector<double> xis = {1.0, 0.75};
  int n_nyquist = 100;
  std::string constellation = "qpsk";
  int trials = 10000;
  std::uint64_t seed = 1;
  std::string grid;  // default depends on axis
  std::string out = "af.csv";

  int execute(RunContext ctx) const {
    check_compressions(xis);
    const auto p = pulse.make();
    const auto c = parse_constellation(constellation);
    const AfAxis ax = axis == "delay" ? AfAxis::delay : AfAxis::doppler;
    const std::string grid_spec =
        !grid.empty() ? grid : (ax == AfAxis::delay ? "0:30:0.25" : "0:2:0.02");
    const auto g = parse_range(grid_spec);

    CsvTable table;
    table.header = {ax == AfAxis::delay ? "delay_s" : "doppler_hz"};
    table.columns.emplace_back(g);
    for (double xi : xis) {
      const int n = fair_count(n_nyquist, xi);
      const double es = xi * pulse.period;
      const auto tag = xi_tag(xi);
      const auto closed = af_slice(p, xi, n, c, ax, g, es);
      table.header.push_back("af_xi" + tag);
      table.columns.push_back(closed.values);
      if (trials > 0) {
        McConfig cfg;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.compression = xi;
        cfg.n_symbols = n;
        cfg.pulse = p;
        cfg.constellation = c;
        const auto mc = mc_af_slice(cfg, ax, g);
        table.header.push_back("af_mc_xi" + tag);
        table.columns.push_back(mc.values);
      }
    }

    ctx.config = pulse.to_json();
    ctx.config["axis"] = axis;
    ctx.config["xi"] = xis;
    ctx.config["N"] = n_nyquist;
    ctx.config["constellation"] = constellation;
    ctx.config["trials"] = trials;
    ctx.config["grid"] = grid_spec;
    ctx.config["out"] = out;
    ctx.emit(out, table);
    return 0;
  }
};

struct XfunCmd {
  PulseOptions pulse;
  std::string fn;
  std::vector<double> xis = {1.0, 0.75};
  int n_nyquist = 100;
  std::string grid;
  std::string out = "xfun.csv";

  int execute(RunContext ctx) const {
    check_compressions(xis);
    const auto p = pulse.make();
    const bool delay_fn = fn == "x";
    const std::string grid_spec =
        !grid.empty() ? grid : (delay_fn ? "0:30:0.05" : "0:2:0.005");
    const auto g = parse_range(grid_spec);

    CsvTable table;
    table.header = {delay_fn ? "delay_s" : "doppler_hz"};
    table.columns.emplace_back(g);
    for (double xi : xis) {
      std::vector<double> col;
      col.reserve(g.size());
      for (double v : g) {
        col.push_back(delay_fn
                          ? accumulated_isi(p, xi, n_nyquist, v)
                          : periodic_doppler_variation(p, xi, n_nyquist, v));
      }
      table.header.push_back((delay_fn ? "x_xi" : "y_xi") + xi_tag(xi));
      table.columns.push_back(std::move(col));
    }

    ctx.config = pulse.to_json();
    ctx.config["fn"] = fn;
    ctx.config["xi"] = xis;
    ctx.config["N"] = n_nyquist;
    ctx.config["grid"] = grid_spec;
    ctx.config["out"] = out;
    ctx.emit(out, table);
    return 0;
  }
};

struct DopplerMseCmd {
  PulseOptions pulse{.family = "rrc", .beta = 0.5, .period = 1.0};
  std::vector<double> xis = {0.6, 1.0};
  int n_nyquist = 100;
  std::string constellation = "qpsk";
  std::string targets = "1@0.5,0.15@-0.4";
  std::string snr = "0:20:2.5";
  int trials = 500;
  std::uint64_t seed = 1;
  std::string window = "-0.7:0.7";
  std::string out = "doppler_mse.csv";

  int execute(RunContext ctx) const {
    check_compressions(xis);
    const auto p = pulse.make();
    const auto c = parse_constellation(constellation);
    const auto win = split(window, ':');
    if (win.size() != 2) {
      throw std::invalid_argument("window must be lo:hi");
    }

    DopplerSceneConfig scene;
    scene.targets = parse_targets(targets);
    scene.snr_db_grid = parse_range(snr);
    scene.trials = trials;
    scene.seed = seed;
    scene.n_nyquist = n_nyquist;
    scene.search_lo = parse_number(win[0]);
    scene.search_hi = parse_number(win[1]);

    CsvTable table;
    table.header = {"snr_db"};
    table.columns.emplace_back(scene.snr_db_grid);
    for (double xi : xis) {
      const auto mse = doppler_mse(scene, p, xi, c);
      table.header.push_back("mse_hz2_xi" + xi_tag(xi));
      table.columns.push_back(mse);
    }

    ctx.config = pulse.to_json();
    ctx.config["xi"] = xis;
    ctx.config["N"] = n_nyquist;
    ctx.config["constellation"] = constellation;
    ctx.config["targets"] = targets;
    ctx.config["snr_db"] = snr;
    ctx.config["trials"] = trials;
    ctx.config["window"] = window;
    ctx.config["out"] = out;
    ctx.emit(out, table);
    return 0;
  }
};

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Single-carrier faster-than-Nyquist link and sensing analysis"};
  app.set_version_flag("--app-version", kVersion);
  app.set_config("--config", "", "INI config file (flags take precedence)");
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  int threads = 1;
  app.add_option("--seed", seed, "base seed for every random draw")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker count recorded in the manifest")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  SpectrumCmd spectrum;
  auto* sc = app.add_subcommand(
      "spectrum", "energy spectrum with folded and twisted-folded overlays");
  spectrum.pulse.attach(sc);
  sc->add_option("--xi", spectrum.xis, "compression factors (repeatable)");
  sc->add_option("--grid", spectrum.grid, "frequency grid a:b:step in Hz");
  sc->add_option("--out", spectrum.out, "output CSV path");

  SeCmd se;
  auto* se_cmd = app.add_subcommand(
      "se", "spectral efficiency with upper/lower bounds over an SNR grid");
  se.pulse.attach(se_cmd);
  se_cmd->add_option("--xi", se.xis, "compression factors (repeatable)");
  se_cmd->add_option("--snr-db", se.snr, "SNR grid a:b:step in dB");
  se_cmd->add_option("--channel", se.channel,
                     "fixed channel h1@tau1,h2@tau2,... (complex re+imj)");
  se_cmd->add_flag("--ergodic", se.ergodic,
                   "average over a random channel ensemble instead");
  se_cmd->add_option("--paths", se.paths, "ensemble path count");
  se_cmd->add_option("--tau-max", se.tau_max,
                     "ensemble maximum delay in seconds");
  se_cmd->add_option("--trials", se.trials, "ensemble trial count");
  se_cmd->add_option("--check-matrix", se.check_matrix,
                     "emit the finite-size matrix rate at this block length");
  se_cmd->add_flag("--cyclic,!--no-cyclic", se.cyclic,
                   "cyclic-prefix wrap for --check-matrix");
  se_cmd->add_option("--out", se.out, "output CSV path");

  AfCmd af;
  auto* af_cmd = app.add_subcommand(
      "af", "expected normalized squared ambiguity slices, closed form and "
            "Monte Carlo");
  af.pulse.attach(af_cmd);
  af_cmd->add_option("--axis", af.axis, "slice axis")
      ->required()
      ->check(CLI::IsMember({"delay", "doppler"}));
  af_cmd->add_option("--xi", af.xis, "compression factors (repeatable)");
  af_cmd->add_option("--N", af.n_nyquist,
                     "orthogonal-rate symbol count (per-xi counts are scaled "
                     "to matched occupancy)");
  af_cmd->add_option("--constellation", af.constellation,
                     "qpsk|8psk|16qam|64qam|gaussian");
  af_cmd->add_option("--trials", af.trials,
                     "Monte Carlo trials (0 disables the empirical columns)");
  af_cmd->add_option("--grid", af.grid, "offset grid a:b:step");
  af_cmd->add_option("--out", af.out, "output CSV path");

  XfunCmd xfun;
  auto* xf_cmd = app.add_subcommand(
      "xfun", "accumulated ISI response x(tau) or periodic Doppler variation "
              "y(nu)");
  xfun.pulse.attach(xf_cmd);
  xf_cmd->add_option("--fn", xfun.fn, "which response to tabulate")
      ->required()
      ->check(CLI::IsMember({"x", "y"}));
  xf_cmd->add_option("--xi", xfun.xis, "compression factors (repeatable)");
  xf_cmd->add_option("--N", xfun.n_nyquist, "symbol count");
  xf_cmd->add_option("--grid", xfun.grid, "offset grid a:b:step");
  xf_cmd->add_option("--out", xfun.out, "output CSV path");

  DopplerMseCmd dm;
  auto* dm_cmd = app.add_subcommand(
      "doppler-mse",
      "two-target Doppler estimation error over an SNR grid");
  dm.pulse.attach(dm_cmd);
  dm_cmd->add_option("--xi", dm.xis, "compression factors (repeatable)");
  dm_cmd->add_option("--N", dm.n_nyquist, "orthogonal-rate symbol count");
  dm_cmd->add_option("--constellation", dm.constellation,
                     "qpsk|8psk|16qam|64qam");
  dm_cmd->add_option("--targets", dm.targets,
                     "targets reflectivity@doppler,...");
  dm_cmd->add_option("--snr-db", dm.snr, "SNR grid a:b:step in dB");
  dm_cmd->add_option("--trials", dm.trials, "trials per SNR point");
  dm_cmd->add_option("--window", dm.window, "search window lo:hi in Hz");
  dm_cmd->add_option("--out", dm.out, "output CSV path");

  std::vector<const char*> argv;
  argv.push_back("ftnisac");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()),
              const_cast<char**>(argv.data()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunContext ctx;
    ctx.seed = seed;
    ctx.threads = threads;
    if (sc->parsed()) {
      ctx.command = "spectrum";
      return spectrum.execute(std::move(ctx));
    }
    if (se_cmd->parsed()) {
      ctx.command = "se";
      se.seed = seed;
      return se.execute(std::move(ctx));
    }
    if (af_cmd->parsed()) {
      ctx.command = "af";
      af.seed = seed;
      return af.execute(std::move(ctx));
    }
    if (xf_cmd->parsed()) {
      ctx.command = "xfun";
      return xfun.execute(std::move(ctx));
    }
    if (dm_cmd->parsed()) {
      ctx.command = "doppler-mse";
      dm.seed = seed;
      return dm.execute(std::move(ctx));
    }
    std::fprintf(stderr, "no subcommand selected\n");
    return 2;
  } catch (const ConditioningError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  }
}

}  // namespace ftnisac::cli
