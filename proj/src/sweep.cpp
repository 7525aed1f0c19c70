#include "lbo/sweep.hpp"

#include <atomic>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "lbo/rng.hpp"

namespace lbo {

std::string axis_name(SweepAxis axis) {
  return axis == SweepAxis::ArrivalProb ? "p" : "q";
}

SweepAxis axis_from_string(const std::string& name) {
  if (name == "p" || name == "arrival_prob") return SweepAxis::ArrivalProb;
  if (name == "q" || name == "departure_prob") return SweepAxis::DepartureProb;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

void ExperimentConfig::validate() const {
  params.validate();
  delay.validate();
  sim.validate();
  if (!(sweep.step > 0.0)) throw std::invalid_argument("sweep step must be positive");
  if (sweep.start > sweep.stop)
    throw std::invalid_argument("sweep start must not exceed stop");
  for (double v : grid_values(sweep))
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument("sweep values must lie in (0,1)");
  if (!(sweep.fixed_value > 0.0 && sweep.fixed_value < 1.0))
    throw std::invalid_argument("fixed probability must lie in (0,1)");
  if (policies.empty()) throw std::invalid_argument("at least one policy required");
  for (const PolicySpec& spec : policies)
    if (spec.kind == PolicyKind::FixedThreshold &&
        (spec.threshold < 0 || spec.threshold > params.buffer_size))
      throw std::invalid_argument("fixed threshold outside [0, buffer_size]");
}

std::vector<double> grid_values(const SweepSpec& spec) {
  const long count =
      static_cast<long>(std::floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(std::max(count, 1L)));
  for (long i = 0; i < count; ++i) values.push_back(spec.start + i * spec.step);
  return values;
}

std::uint64_t point_seed(std::uint64_t master, SweepAxis axis, double value) {
  const std::uint64_t axis_tag = axis == SweepAxis::ArrivalProb ? 0x70 : 0x71;
  return splitmix64(master ^ splitmix64(axis_tag ^ splitmix64(std::bit_cast<std::uint64_t>(value))));
}

namespace {

SystemParams params_at(const ExperimentConfig& config, double value) {
  SystemParams params = config.params;
  if (config.sweep.axis == SweepAxis::ArrivalProb) {
    params.arrival_prob = value;
    params.departure_prob = config.sweep.fixed_value;
  } else {
    params.departure_prob = value;
    params.arrival_prob = config.sweep.fixed_value;
  }
  return params;
}

SweepRow sweep_point(const ExperimentConfig& config, double value) {
  const SystemParams params = params_at(config, value);
  params.validate();

  const SolveResult solved = solve(params, config.delay);
  if (!solved.converged)
    throw std::runtime_error("MDP solve did not converge");

  SweepRow row;
  row.axis = config.sweep.axis;
  row.value = value;
  row.mdp_threshold = solved.threshold;

  const std::uint64_t base_seed = point_seed(config.sim.seed, config.sweep.axis, value);
  for (std::size_t k = 0; k < config.policies.size(); ++k) {
    const PolicyTable table = bind_policy(config.policies[k], params, config.delay, &solved);
    SimConfig sim = config.sim;
    sim.seed = stream_seed(base_seed, k);
    const SimulationReport report = simulate(params, config.delay, table, sim);
    row.outcomes.push_back({policy_name(config.policies[k]),
                            policy_gain(params, config.delay, table.actions),
                            report.success_rate, report.ci95_halfwidth});
  }
  return row;
}

std::string format_g9(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string temp = path + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + temp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::remove(temp.c_str());
      throw std::runtime_error("failed while writing " + temp);
    }
  }
  if (std::rename(temp.c_str(), path.c_str()) != 0) {
    const std::string reason = std::strerror(errno);
    std::remove(temp.c_str());
    throw std::runtime_error("cannot move " + temp + " to " + path + ": " + reason);
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int workers) {
  config.validate();
  const std::vector<double> values = grid_values(config.sweep);
  std::vector<SweepRow> rows(values.size());
  std::vector<std::exception_ptr> failures(values.size());

  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(values.size())));
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < values.size();
         i = cursor.fetch_add(1)) {
      try {
        rows[i] = sweep_point(config, values[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep aborted at " + axis_name(config.sweep.axis) +
                               " = " + format_g9(values[i]) + ": " + e.what());
    }
  }
  return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("no rows to write");

  std::string csv = "sweep_param,sweep_value";
  for (const PolicyOutcome& outcome : rows.front().outcomes)
    csv += "," + outcome.policy + "_gain," + outcome.policy + "_sim_success," +
           outcome.policy + "_ci95";
  csv += ",threshold,threshold_is_clean\n";

  for (const SweepRow& row : rows) {
    csv += axis_name(row.axis) + "," + format_g9(row.value);
    for (const PolicyOutcome& outcome : row.outcomes)
      csv += "," + format_g9(outcome.gain) + "," + format_g9(outcome.sim_success) +
             "," + format_g9(outcome.ci95);
    csv += "," + std::to_string(row.mdp_threshold.first_core) + "," +
           (row.mdp_threshold.clean ? "true" : "false") + "\n";
  }
  write_file_atomic(path, csv);
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string format_coord(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string format_tick(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4g", value);
  return buffer;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string render_chart(const std::vector<Series>& series, const std::string& x_label,
                         const std::string& y_label) {
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 70, kRight = 615, kTop = 25, kBottom = 370;

  double x_min = series.front().points.front().first, x_max = x_min;
  double y_min = series.front().points.front().second, y_max = y_min;
  for (const Series& s : series)
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x); x_max = std::max(x_max, x);
      y_min = std::min(y_min, y); y_max = std::max(y_max, y);
    }
  if (x_max - x_min < 1e-12) { x_min -= 0.5; x_max += 0.5; }
  if (y_max - y_min < 1e-12) { y_min -= 0.5; y_max += 0.5; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad; y_max += y_pad;

  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * (kRight - kLeft); };
  auto sy = [&](double y) { return kBottom - (y - y_min) / (y_max - y_min) * (kBottom - kTop); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_coord(kWidth) +
         "\" height=\"" + format_coord(kHeight) + "\" viewBox=\"0 0 640 420\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n";
  svg += "<line x1=\"" + format_coord(kLeft) + "\" y1=\"" + format_coord(kBottom) +
         "\" x2=\"" + format_coord(kRight) + "\" y2=\"" + format_coord(kBottom) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + format_coord(kLeft) + "\" y1=\"" + format_coord(kTop) +
         "\" x2=\"" + format_coord(kLeft) + "\" y2=\"" + format_coord(kBottom) +
         "\" stroke=\"black\"/>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = x_min + tick * (x_max - x_min) / 4;
    const double fy = y_min + tick * (y_max - y_min) / 4;
    svg += "<line x1=\"" + format_coord(sx(fx)) + "\" y1=\"" + format_coord(kBottom) +
           "\" x2=\"" + format_coord(sx(fx)) + "\" y2=\"" + format_coord(kBottom + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_coord(sx(fx)) + "\" y=\"" + format_coord(kBottom + 18) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" +
           format_tick(fx) + "</text>\n";
    svg += "<line x1=\"" + format_coord(kLeft - 5) + "\" y1=\"" + format_coord(sy(fy)) +
           "\" x2=\"" + format_coord(kLeft) + "\" y2=\"" + format_coord(sy(fy)) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + format_coord(kLeft - 8) + "\" y=\"" + format_coord(sy(fy) + 4) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" +
           format_tick(fy) + "</text>\n";
  }
  svg += "<text x=\"" + format_coord((kLeft + kRight) / 2) + "\" y=\"" +
         format_coord(kHeight - 12) +
         "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">" +
         x_label + "</text>\n";
  svg += "<text x=\"16\" y=\"" + format_coord((kTop + kBottom) / 2) +
         "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 " + format_coord((kTop + kBottom) / 2) + ")\">" +
         y_label + "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const Series& s = series[i];
    if (s.points.size() > 1) {
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : s.points)
        svg += format_coord(sx(x)) + "," + format_coord(sy(y)) + " ";
      svg.pop_back();
      svg += "\"/>\n";
    }
    for (auto [x, y] : s.points)
      svg += "<circle cx=\"" + format_coord(sx(x)) + "\" cy=\"" + format_coord(sy(y)) +
             "\" r=\"3\" fill=\"" + color + "\"/>\n";
    const double ly = kTop + 16 * static_cast<double>(i);
    svg += "<line x1=\"" + format_coord(kRight - 130) + "\" y1=\"" + format_coord(ly) +
           "\" x2=\"" + format_coord(kRight - 110) + "\" y2=\"" + format_coord(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + format_coord(kRight - 104) + "\" y=\"" + format_coord(ly + 4) +
           "\" font-family=\"monospace\" font-size=\"11\">" + s.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace

void emit_plot(const std::vector<SweepRow>& rows, const std::string& path,
               PlotKind kind) {
  if (rows.empty()) throw std::invalid_argument("no rows to plot");

  const std::string x_label = rows.front().axis == SweepAxis::ArrivalProb
                                  ? "arrival probability p"
                                  : "departure probability q";
  std::vector<Series> series;
  if (kind == PlotKind::Reward) {
    for (std::size_t k = 0; k < rows.front().outcomes.size(); ++k) {
      Series s;
      s.label = rows.front().outcomes[k].policy;
      for (const SweepRow& row : rows)
        s.points.emplace_back(row.value, row.outcomes[k].gain);
      series.push_back(std::move(s));
    }
  } else {
    Series s;
    s.label = "mdp threshold";
    for (const SweepRow& row : rows)
      s.points.emplace_back(row.value, static_cast<double>(row.mdp_threshold.first_core));
    series.push_back(std::move(s));
  }
  const std::string y_label =
      kind == PlotKind::Reward ? "average reward (gain)" : "threshold";
  write_file_atomic(path, render_chart(series, x_label, y_label));
}

}  // namespace lbo
