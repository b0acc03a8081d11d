// persist: command-line front end for the persistence analysis library.
//
// Every subcommand prints a JSON summary on stdout. With --out, the primary
// artifact (CSV or JSON) goes to that path and a run manifest to
// <out>.manifest.json; `persist replay --manifest <file>` re-runs a manifest
// and checks that the output is byte-identical.
//
// Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "persist/persist.hpp"

namespace {

using nlohmann::json;
using namespace persist;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file '" + path + "'");
  out << content;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return "sha256:" + out;
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  auto v = parse_double_list(text, field);
  if (v.empty()) throw usage_error("empty list for " + field);
  return v;
}

/// Options shared by most subcommands.
struct Common {
  std::string input;
  std::string col = "0";
  std::string out;
  double sample_period = 1.0;
};

struct Result {
  std::string primary;  ///< written to --out; empty means the summary is the artifact
  json summary;
  json parameters = json::object();
  std::optional<std::uint64_t> seed;
};

struct Context {
  Common common;
  std::string input_digest;

  TimeSeries series() {
    if (common.input.empty()) throw usage_error("--input is required");
    const std::string raw = read_file(common.input);
    input_digest = sha256_hex(raw);
    std::istringstream in(raw);
    auto table = CsvTable::parse(in, common.input);
    return TimeSeries(table.numeric_column(common.col), common.sample_period, table.header()[table.column_index(common.col)]);
  }

  CsvTable table() {
    if (common.input.empty()) throw usage_error("--input is required");
    const std::string raw = read_file(common.input);
    input_digest = sha256_hex(raw);
    std::istringstream in(raw);
    return CsvTable::parse(in, common.input);
  }
};

std::vector<std::size_t> resolve_scales(const std::string& text, std::size_t n, std::size_t min_scale) {
  if (text == "auto") return default_scales(n, min_scale - 2);
  auto parts = split(text, ':');
  if (parts.size() == 4) {
    const auto lo = parse_int(parts[0], "--scales min");
    const auto hi = parse_int(parts[1], "--scales max");
    const auto count = parse_int(parts[2], "--scales count");
    if (lo < 1 || hi < lo || count < 1) throw usage_error("--scales: need 1 <= min <= max and count >= 1");
    if (parts[3] == "log") {
      return log_scales(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi), static_cast<std::size_t>(count));
    }
    if (parts[3] == "lin") {
      std::vector<std::size_t> out;
      for (std::int64_t i = 0; i < count; ++i) {
        const auto s = static_cast<std::size_t>(
            lo + (count == 1 ? 0 : (hi - lo) * i / (count - 1)));
        if (out.empty() || s > out.back()) out.push_back(s);
      }
      return out;
    }
    throw usage_error("--scales spacing must be 'log' or 'lin'");
  }
  std::vector<std::size_t> out;
  for (const auto& item : split(text, ',')) {
    const auto s = parse_int(item, "--scales");
    if (s < 1) throw usage_error("--scales entries must be positive");
    out.push_back(static_cast<std::size_t>(s));
  }
  return out;
}

FitRange make_fit_range(double lo, double hi) {
  FitRange r;
  if (lo > 0) r.s_min = lo;
  if (hi > 0) r.s_max = hi;
  return r;
}

std::string series_csv(const TimeSeries& s) {
  CsvWriter w({"value"});
  for (double v : s) w.add_row({format_number(v)});
  return w.str();
}

/// Bridges CLI11 values to the handlers without one struct per subcommand.
struct Args {
  // thresholds / states
  std::string thresholds, labels;
  // markov, dfa
  std::size_t order = 1;
  std::size_t dfa_order = 2;
  std::string scales = "auto";
  double fit_min = 0, fit_max = 0;
  bool crossover = false;
  std::string qs = "-4,-2,0,2,4";
  std::string filter = "haar";
  bool pad = false;
  std::size_t kmax = 20;
  double fit_fraction = 0.1;
  double significance = 3.0;
  // master
  std::string rates, p0;
  double t_end = 1.0, dt = 1e-3;
  std::size_t record_every = 1;
  // synth, firstchange
  std::string spec;
  std::optional<std::int64_t> seed;
  double epsilon = 1.0;
  std::size_t epochs = 10000;
  unsigned threads = 0;
  // rescale
  std::size_t block = 1;
  // forecast
  std::string variant = "CS-NV1";
  std::size_t k = 1;
  double alpha = 0.75, beta = 1.25;
  std::string obs_col = "irradiance", cs_col = "clearsky", time_col = "timestamp";
  // crossover
  std::string s_col = "s", f_col = "F";
  // convert
  double value = 0;
  std::string from, to;
  int dimension = 1;
  // replay
  std::string manifest;
};

json dwell_json(const DwellStats& d) {
  json j = json::object();
  for (const auto& [state, s] : d.per_state) {
    j[std::to_string(state)] = {{"episodes", s.episodes}, {"n_visits", s.n_visits}, {"n_samples", s.n_samples},
                                {"mean_dwell", s.mean_dwell}, {"max_dwell", s.max_dwell}, {"frequency", s.frequency}};
  }
  return j;
}

Result run_states(Context& ctx, const Args& a) {
  auto x = ctx.series();
  std::vector<int> labels;
  for (double v : parse_list(a.labels, "--labels")) labels.push_back(static_cast<int>(v));
  ThresholdMap map(parse_list(a.thresholds, "--thresholds"), labels);
  auto s = build_state_sequence(x, map);
  CsvWriter w({"index", "value", "state"});
  for (std::size_t i = 0; i < s.size(); ++i) w.add_row({std::to_string(i), format_number(x[i]), std::to_string(s[i])});
  Result r;
  r.primary = w.str();
  r.parameters = {{"thresholds", map.thresholds()}, {"labels", map.labels()}};
  r.summary = {{"length", s.size()}, {"alphabet", std::vector<int>(s.alphabet().begin(), s.alphabet().end())}};
  return r;
}

Result run_metrics(Context& ctx, const Args&) {
  auto table = ctx.table();
  StateSequence s(table.integer_column(ctx.common.col));
  const auto burst = persistence_burst(s);
  json pb = json::object();
  for (const auto& [state, v] : burst.per_state) pb[std::to_string(state)] = v;
  json pp = json::object();
  for (int state : s.alphabet()) {
    json dist = json::object();
    for (const auto& [len, p] : persistence_pp(s, state)) dist[std::to_string(len)] = p;
    pp[std::to_string(state)] = dist;
  }
  Result r;
  r.summary = {{"length", s.size()},
               {"PE", persistence_expected(s)},
               {"PM", s.size() >= 2 ? json(persistence_markov(s)) : json(nullptr)},
               {"Pb", pb},
               {"Pb_max", burst.max_ratio},
               {"Pb_S", burst.mean_ratio},
               {"PP", pp},
               {"dwell", dwell_json(dwell_stats(s))}};
  return r;
}

Result run_markov(Context& ctx, const Args& a) {
  auto table = ctx.table();
  StateSequence s(table.integer_column(ctx.common.col));
  auto model = fit_markov(s, a.order);
  Result r;
  r.primary = model.to_json().dump(2) + "\n";
  r.parameters = {{"order", a.order}};
  r.summary = model.to_json();
  return r;
}

Result run_dfa(Context& ctx, const Args& a) {
  auto x = ctx.series();
  const auto scales = resolve_scales(a.scales, x.size(), a.dfa_order + 2);
  auto sr = dfa(x, scales, a.dfa_order, make_fit_range(a.fit_min, a.fit_max));
  if (a.crossover) sr.crossover = crossover_fit(sr);
  Result r;
  r.primary = sr.to_csv();
  r.parameters = {{"order", a.dfa_order}, {"scales", scales}, {"crossover", a.crossover}};
  r.summary = sr.summary_json();
  r.summary["alpha"] = sr.exponent;
  return r;
}

Result run_mfdfa(Context& ctx, const Args& a) {
  auto x = ctx.series();
  const auto scales = resolve_scales(a.scales, x.size(), a.dfa_order + 2);
  const auto qs = parse_list(a.qs, "--qs");
  auto res = mfdfa(x, scales, qs, a.dfa_order, make_fit_range(a.fit_min, a.fit_max));
  json h = json::object();
  for (const auto& [q, v] : res.h_of_q) h[format_number(q)] = v;
  Result r;
  r.primary = res.to_csv();
  r.parameters = {{"order", a.dfa_order}, {"scales", scales}, {"qs", qs}};
  r.summary = {{"h", h}, {"skipped_segments", res.skipped_segments}};
  return r;
}

Result run_rs(Context& ctx, const Args& a) {
  auto x = ctx.series();
  const auto scales = resolve_scales(a.scales, x.size(), 10);
  auto sr = hurst_rs(x, scales, make_fit_range(a.fit_min, a.fit_max));
  Result r;
  CsvWriter w({"s", "RS"});
  for (std::size_t i = 0; i < sr.scales.size(); ++i) w.add_row({std::to_string(sr.scales[i]), format_number(sr.fluctuations[i])});
  r.primary = w.str();
  r.parameters = {{"scales", scales}};
  r.summary = sr.summary_json();
  r.summary["H"] = sr.exponent;
  return r;
}

Result run_wavelet(Context& ctx, const Args& a) {
  auto x = ctx.series();
  WaveletFilter filter;
  if (a.filter == "haar") {
    filter = WaveletFilter::haar();
  } else if (a.filter == "db4") {
    filter = WaveletFilter::daubechies4();
  } else {
    throw usage_error("--filter must be 'haar' or 'db4'");
  }
  auto res = wavelet_beta(x, filter, a.pad ? LengthPolicy::pad : LengthPolicy::truncate);
  CsvWriter w({"level", "coefficients", "variance"});
  for (std::size_t i = 0; i < res.levels.size(); ++i) {
    w.add_row({std::to_string(res.levels[i]), std::to_string(res.coefficients[i]), format_number(res.variance[i])});
  }
  Result r;
  r.primary = w.str();
  r.parameters = {{"filter", a.filter}, {"pad", a.pad}};
  r.summary = {{"beta", res.beta}, {"fitted_levels", res.fitted_levels}};
  return r;
}

Result run_acf(Context& ctx, const Args& a) {
  auto x = ctx.series();
  auto r_k = acf(x, a.kmax);
  CsvWriter w({"k", "r"});
  for (std::size_t k = 0; k < r_k.size(); ++k) w.add_row({std::to_string(k), format_number(r_k[k])});
  Result r;
  r.primary = w.str();
  r.parameters = {{"kmax", a.kmax}};
  r.summary = {{"r1", r_k.size() > 1 ? json(r_k[1]) : json(nullptr)}};
  return r;
}

Result run_semivar(Context& ctx, const Args& a) {
  auto x = ctx.series();
  auto sv = semivariogram(x, a.kmax);
  CsvWriter w({"k", "gamma"});
  for (std::size_t k = 0; k < sv.gamma.size(); ++k) w.add_row({std::to_string(k), format_number(sv.gamma[k])});
  Result r;
  r.primary = w.str();
  r.parameters = {{"kmax", a.kmax}};
  r.summary = {{"hausdorff", sv.hausdorff ? json(*sv.hausdorff) : json(nullptr)},
               {"beta", sv.beta() ? json(*sv.beta()) : json(nullptr)}};
  return r;
}

Result run_psd(Context& ctx, const Args& a) {
  auto x = ctx.series();
  const double beta = psd_beta(x, a.fit_fraction);
  const auto p = periodogram(x);
  CsvWriter w({"f", "power"});
  for (std::size_t i = 0; i < p.frequency.size(); ++i) w.add_row({format_number(p.frequency[i]), format_number(p.power[i])});
  Result r;
  r.primary = w.str();
  r.parameters = {{"fit_fraction", a.fit_fraction}};
  r.summary = {{"beta", beta}};
  return r;
}

Result run_efold(Context& ctx, const Args& a) {
  auto x = ctx.series();
  const double a_hat = fit_ar1(x);
  Result r;
  r.parameters = {{"sample_period", x.sample_period()}, {"significance", a.significance}};
  r.summary = {{"a_hat", a_hat}, {"efolding_time", efolding_from_series(x, a.significance)}};
  return r;
}

Result run_master(Context&, const Args& a) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : split(a.rates, ';')) rows.push_back(parse_list(row, "--rates"));
  RateMatrix rates(rows);
  auto traj = master_equation_evolve(rates, parse_list(a.p0, "--p0"), {a.t_end, a.dt, a.record_every});
  std::vector<std::string> header{"t"};
  for (std::size_t i = 0; i < rates.size(); ++i) header.push_back("P" + std::to_string(i));
  CsvWriter w(header);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    std::vector<std::string> row{format_number(traj.times[i])};
    for (double p : traj.probabilities[i]) row.push_back(format_number(p));
    w.add_row(row);
  }
  Result r;
  r.primary = w.str();
  r.parameters = {{"rates", rows}, {"p0", a.p0}, {"t_end", a.t_end}, {"dt", a.dt}, {"record_every", a.record_every}};
  r.summary = {{"final", traj.probabilities.back()}, {"t_end", traj.times.back()}};
  return r;
}

Result run_synth(Context&, const Args& a) {
  auto t = TextSpec::parse(a.spec);
  if (a.seed && t.has("seed") && t.integer("seed") != *a.seed) {
    throw usage_error("--seed disagrees with the seed in --spec");
  }
  if (!a.seed && !t.has("seed")) throw usage_error("synth requires an explicit seed (--seed or seed= in --spec)");
  const auto seed = static_cast<std::uint64_t>(a.seed ? *a.seed : t.integer("seed"));

  TimeSeries series;
  json params;
  if (t.get("kind") == "arma") {
    std::string arma_text;
    for (const auto& [key, value] : t.entries()) {
      if (key != "kind" && key != "n" && key != "seed") arma_text += key + "=" + value + ";";
    }
    const auto spec = ArmaSpec::parse(arma_text);
    const auto n = t.integer("n");
    if (n < 1) throw usage_error("n must be positive");
    auto sim = simulate(spec, static_cast<std::size_t>(n), seed);
    if (sim.explosive()) std::cerr << "warning: explosive AR specification\n";
    series = sim.series;
    params = {{"kind", "arma"}, {"ar", spec.ar}, {"ma", spec.ma}, {"sigma", spec.noise_sigma}, {"n", n}};
  } else {
    std::string text = a.spec;
    if (!t.has("seed")) text += "; seed=" + std::to_string(seed);
    const auto g = parse_generator_spec(text);
    series = generate(g);
    params = {{"kind", t.get("kind")}, {"mu", g.mu}, {"sigma", g.sigma}, {"low", g.low},
              {"high", g.high}, {"beta", g.beta}, {"n", g.n}};
  }
  Result r;
  r.primary = series_csv(series);
  r.parameters = params;
  r.seed = seed;
  r.summary = {{"n", series.size()}, {"mean", mean(series.values())}, {"std", stddev(series.values())}};
  return r;
}

Result run_rescale(Context& ctx, const Args& a) {
  auto x = ctx.series();
  auto y = block_rescale(x, a.block);
  Result r;
  r.primary = series_csv(y);
  r.parameters = {{"b", a.block}};
  r.summary = {{"n", y.size()}, {"sample_period", y.sample_period()}};
  return r;
}

Result run_forecast(Context& ctx, const Args& a) {
  auto table = ctx.table();
  TimeSeries obs(table.numeric_column(a.obs_col));
  TimeSeries cs(table.numeric_column(a.cs_col));
  std::vector<std::string> stamps;
  if (table.has_column(a.time_col)) {
    stamps = table.text_column(a.time_col);
  } else {
    for (std::size_t i = 0; i < obs.size(); ++i) stamps.push_back(std::to_string(i));
  }
  ForecastConfig cfg{parse_forecast_variant(a.variant), a.k, a.alpha, a.beta};
  auto f = predict(cfg, cs, obs);
  CsvWriter w({"timestamp", "prediction", "valid"});
  for (std::size_t i = 0; i < obs.size(); ++i) {
    w.add_row({stamps[i], f.valid[i] ? format_number(f.prediction[i]) : std::string("nan"), f.valid[i] ? "1" : "0"});
  }
  Result r;
  r.primary = w.str();
  r.parameters = {{"variant", a.variant}, {"k", a.k}, {"alpha", a.alpha}, {"beta", a.beta}};
  r.summary = evaluate(f, obs).to_json();
  r.summary["variant"] = a.variant;
  r.summary["negative_radicand"] = f.negative_radicand.size();
  r.summary["insufficient_history"] = f.insufficient_history;
  return r;
}

Result run_crossover(Context& ctx, const Args& a) {
  auto table = ctx.table();
  const auto s_raw = table.numeric_column(a.s_col);
  std::vector<std::size_t> scales;
  for (double s : s_raw) {
    if (!(s >= 1.0) || s != std::floor(s)) throw data_error("column '" + a.s_col + "' must hold positive integer scales");
    scales.push_back(static_cast<std::size_t>(s));
  }
  auto c = crossover_fit(scales, table.numeric_column(a.f_col));
  Result r;
  r.parameters = {{"s_col", a.s_col}, {"f_col", a.f_col}};
  r.summary = {{"s_star", c.s_star},     {"alpha1", c.alpha1},         {"alpha2", c.alpha2},
               {"sse_two", c.sse_two},   {"sse_single", c.sse_single}, {"improvement", c.improvement()}};
  return r;
}

Result run_firstchange(Context&, const Args& a) {
  if (!a.seed) throw usage_error("firstchange requires --seed");
  const auto spec = ArmaSpec::parse(a.spec);
  MonteCarloOptions opt;
  opt.epochs = a.epochs;
  opt.seed = static_cast<std::uint64_t>(*a.seed);
  opt.threads = a.threads;
  auto mc = monte_carlo_first_change(spec, a.epsilon, opt);
  Result r;
  r.parameters = {{"spec", a.spec}, {"epsilon", a.epsilon}, {"epochs", a.epochs}};
  r.seed = opt.seed;
  r.summary = {{"estimate", mc.estimate}, {"std_error", mc.std_error}, {"epochs", mc.epochs}, {"capped", mc.capped}};
  return r;
}

Result run_convert(Context&, const Args& a) {
  const double v = convert_exponents(a.value, parse_exponent(a.from), parse_exponent(a.to), a.dimension);
  Result r;
  r.parameters = {{"value", a.value}, {"from", a.from}, {"to", a.to}, {"dimension", a.dimension}};
  r.summary = {{"value", v}};
  return r;
}

int run(const std::vector<std::string>& argv);

int run_replay(const Args& a) {
  if (a.manifest.empty()) throw usage_error("--manifest is required");
  const json m = json::parse(read_file(a.manifest));
  const auto args = m.at("argv").get<std::vector<std::string>>();
  if (m.contains("input_digest") && !m["input_digest"].is_null() && m.contains("input")) {
    const auto current = sha256_hex(read_file(m["input"].get<std::string>()));
    if (current != m["input_digest"].get<std::string>()) {
      std::cerr << "replay: input digest changed for '" << m["input"].get<std::string>() << "'\n";
      return 1;
    }
  }
  const int code = run(args);
  if (code != 0) return code;
  const auto out = m.at("output").get<std::string>();
  const auto digest = sha256_hex(read_file(out));
  const bool same = digest == m.at("output_digest").get<std::string>();
  std::cout << json{{"replay", same ? "identical" : "mismatch"}, {"output", out}, {"output_digest", digest}}.dump()
            << "\n";
  return same ? 0 : 1;
}

int run(const std::vector<std::string>& argv) {
  CLI::App app{"Persistence analysis of time series", "persist"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  Common common;
  Args a;
  app.add_option("--threads", a.threads, "Cap on worker threads (0: all cores)");

  std::map<std::string, std::function<Result(Context&, const Args&)>> handlers;
  auto add = [&](const std::string& name, const std::string& help, auto handler, bool io = true) {
    auto* sub = app.add_subcommand(name, help);
    if (io) {
      sub->add_option("--input", common.input, "Input CSV file");
      sub->add_option("--col", common.col, "Column name or 0-based index");
      sub->add_option("--sample-period", common.sample_period, "Time units per sample");
    }
    sub->add_option("--out", common.out, "Output file for the primary artifact");
    handlers[name] = handler;
    return sub;
  };

  auto* states = add("states", "Map a series to states with a threshold map", run_states);
  states->add_option("--thresholds", a.thresholds, "Sorted thresholds, comma separated")->required();
  states->add_option("--labels", a.labels, "State labels (one more than thresholds)")->required();

  add("metrics", "Short-term persistence measures of a state column", run_metrics);
  add("markov", "Fit a k-order Markov chain to a state column", run_markov)
      ->add_option("--order", a.order, "Markov order k");

  auto add_scaling = [&](CLI::App* sub) {
    sub->add_option("--scales", a.scales, "auto | min:max:count:log | comma list");
    sub->add_option("--fit-min", a.fit_min, "Smallest scale in the fit");
    sub->add_option("--fit-max", a.fit_max, "Largest scale in the fit");
  };
  auto* dfa_cmd = add("dfa", "Detrended fluctuation analysis", run_dfa);
  add_scaling(dfa_cmd);
  dfa_cmd->add_option("--order", a.dfa_order, "Detrending polynomial order");
  dfa_cmd->add_flag("--crossover", a.crossover, "Also fit a two-regime crossover");
  auto* mf = add("mfdfa", "Multifractal DFA", run_mfdfa);
  add_scaling(mf);
  mf->add_option("--order", a.dfa_order, "Detrending polynomial order");
  mf->add_option("--qs", a.qs, "q values, comma separated");
  add_scaling(add("rs", "Rescaled range (Hurst) analysis", run_rs));
  auto* wav = add("wavelet", "Wavelet variance scaling exponent", run_wavelet);
  wav->add_option("--filter", a.filter, "haar | db4");
  wav->add_flag("--pad", a.pad, "Pad to the next power of two instead of truncating");
  add("acf", "Autocorrelation function", run_acf)->add_option("--kmax", a.kmax, "Largest lag");
  add("semivar", "Semivariogram and Hausdorff exponent", run_semivar)->add_option("--kmax", a.kmax, "Largest lag");
  add("psd", "Periodogram and spectral exponent", run_psd)
      ->add_option("--fit-fraction", a.fit_fraction, "Fraction of lowest frequencies used");
  add("efold", "AR(1) coefficient and e-folding time", run_efold)
      ->add_option("--significance", a.significance, "White-noise band in units of 1/sqrt(N)");

  auto* master = add("master", "Integrate the forward master equation", run_master, false);
  master->add_option("--rates", a.rates, "Rates from;to as rows 'r00,r01;r10,r11'")->required();
  master->add_option("--p0", a.p0, "Initial distribution")->required();
  master->add_option("--t-end", a.t_end, "End time");
  master->add_option("--dt", a.dt, "RK4 step");
  master->add_option("--record-every", a.record_every, "Keep every k-th step");

  auto* synth = add("synth", "Generate a synthetic series", run_synth, false);
  synth->add_option("--spec", a.spec, "Generator spec, e.g. 'kind=ffm; beta=0.6; n=65536; seed=7'")->required();
  synth->add_option("--seed", a.seed, "Seed (alternative to seed= in the spec)");

  add("rescale", "Block-average time-scale change", run_rescale)->add_option("--b", a.block, "Block size")->required();

  auto* fc = add("forecast", "Persistence forecasting baselines", run_forecast);
  fc->add_option("--variant", a.variant, "NV | CS | CS-NV1 | CS-NV2 | CS-NV3 | CS-NV4");
  fc->add_option("--k", a.k, "Lookback steps");
  fc->add_option("--alpha", a.alpha, "Clear-sky weight (CS-NV2, CS-NV4)");
  fc->add_option("--beta", a.beta, "Persistence weight (CS-NV2, CS-NV4)");
  fc->add_option("--obs-col", a.obs_col, "Observed irradiance column");
  fc->add_option("--cs-col", a.cs_col, "Clear-sky column");
  fc->add_option("--time-col", a.time_col, "Timestamp column");

  auto* xo = add("crossover", "Two-regime fit of (s, F) pairs", run_crossover);
  xo->add_option("--s-col", a.s_col, "Scale column");
  xo->add_option("--f-col", a.f_col, "Fluctuation column");

  auto* mc = add("firstchange", "Monte-Carlo first-change time of an ARMA process", run_firstchange, false);
  mc->add_option("--spec", a.spec, "ARMA spec, e.g. 'ar=1; sigma=1'")->required();
  mc->add_option("--epsilon", a.epsilon, "Change threshold on |x[n]-x[n-1]|");
  mc->add_option("--epochs", a.epochs, "Number of epochs");
  mc->add_option("--seed", a.seed, "Master seed")->required();

  auto* conv = add("convert", "Convert between H, alpha, beta and D", run_convert, false);
  conv->add_option("--value", a.value, "Exponent value")->required();
  conv->add_option("--from", a.from, "H | alpha | beta | D")->required();
  conv->add_option("--to", a.to, "H | alpha | beta | D")->required();
  conv->add_option("--dimension", a.dimension, "Embedding dimension for D");

  auto* replay = app.add_subcommand("replay", "Re-run a manifest and verify the output");
  replay->add_option("--manifest", a.manifest, "Manifest file")->required();

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (replay->parsed()) return run_replay(a);

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Context ctx{common, {}};
  Result result = handlers.at(name)(ctx, a);

  const std::string summary = result.summary.dump(2);
  if (!common.out.empty()) {
    const std::string artifact = result.primary.empty() ? summary + "\n" : result.primary;
    write_file(common.out, artifact);
    json manifest = {{"tool", "persist"},
                     {"tool_version", kVersion},
                     {"rng", "philox4x32-10/v" + std::to_string(Rng::kVersion)},
                     {"subcommand", name},
                     {"argv", argv},
                     {"parameters", result.parameters},
                     {"input", common.input.empty() ? json(nullptr) : json(common.input)},
                     {"input_digest", ctx.input_digest.empty() ? json(nullptr) : json(ctx.input_digest)},
                     {"seed", result.seed ? json(*result.seed) : json(nullptr)},
                     {"output", common.out},
                     {"output_digest", sha256_hex(artifact)}};
    write_file(common.out + ".manifest.json", manifest.dump(2) + "\n");
  }
  std::cout << summary << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
