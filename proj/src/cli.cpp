#include "leanreg/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "leanreg/error.hpp"
#include "leanreg/partial_corr.hpp"
#include "leanreg/sandwich.hpp"

namespace leanreg::cli {

using json = nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Fit: return "fit";
    case Command::Pcor: return "pcor";
    case Command::Simulate: return "simulate";
    case Command::Verify: return "verify";
  }
  return "unknown";
}

namespace {

Command parse_command(const std::string& name) {
  if (name == "fit") return Command::Fit;
  if (name == "pcor") return Command::Pcor;
  if (name == "simulate") return Command::Simulate;
  if (name == "verify") return Command::Verify;
  throw Error(ErrorKind::Usage, "unknown command '" + name + "'");
}

[[noreturn]] void usage(const std::string& what) { throw Error(ErrorKind::Usage, what); }

// ---- canonical JSON ----------------------------------------------------------

void format_double(double v, std::string& out) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void dump_canonical(const json& node, std::string& out) {
  switch (node.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : node.items()) {  // std::map: keys sorted
        if (!first) out += ',';
        first = false;
        out += json(key).dump();
        out += ':';
        dump_canonical(value, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < node.size(); ++i) {
        if (i > 0) out += ',';
        dump_canonical(node[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: format_double(node.get<double>(), out); break;
    default: out += node.dump(); break;
  }
}

std::string canonical(const json& node) {
  std::string out;
  dump_canonical(node, out);
  return out;
}

json to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
  return rows;
}

// ---- config ------------------------------------------------------------------

template <typename T>
T typed(const json& value, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!value.is_boolean()) throw std::invalid_argument("");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!value.is_string()) throw std::invalid_argument("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!value.is_number_unsigned()) throw std::invalid_argument("");
    } else {
      if (!value.is_number()) throw std::invalid_argument("");
    }
    return value.get<T>();
  } catch (const std::exception&) {
    usage("config key '" + key + "' has the wrong type");
  }
}

SimConfig& sim_block(RunConfig& config) {
  if (!config.sim) {
    config.sim.emplace();
    config.sim->spec.error.nu = 6.0;
  }
  return *config.sim;
}

void apply_key(const std::string& key, const json& value, RunConfig& config) {
  if (key == "command") {
    config.command = parse_command(typed<std::string>(value, key));
  } else if (key == "input") {
    config.input_path = typed<std::string>(value, key);
  } else if (key == "response") {
    config.response_column = value.is_number_unsigned() ? std::to_string(value.get<std::uint64_t>())
                                                        : typed<std::string>(value, key);
  } else if (key == "intercept") {
    config.intercept = typed<bool>(value, key);
  } else if (key == "alpha") {
    config.alpha = typed<double>(value, key);
  } else if (key == "method") {
    config.method = parse_method(typed<std::string>(value, key));
  } else if (key == "boot_b") {
    config.bootstrap_b = typed<std::size_t>(value, key);
  } else if (key == "seed") {
    config.seed = typed<std::uint64_t>(value, key);
  } else if (key == "output") {
    config.output_path = typed<std::string>(value, key);
  } else if (key == "threads") {
    config.threads = static_cast<int>(typed<unsigned>(value, key));
  } else if (key == "sim_n") {
    sim_block(config).spec.n = typed<std::size_t>(value, key);
  } else if (key == "sim_d") {
    sim_block(config).spec.d = typed<std::size_t>(value, key);
  } else if (key == "sim_family") {
    sim_block(config).spec.family = lab::parse_family(typed<std::string>(value, key));
  } else if (key == "sim_error") {
    const auto name = typed<std::string>(value, key);
    auto& law = sim_block(config).spec.error;
    if (name == "gaussian") {
      law.kind = lab::ErrorLaw::Kind::Gaussian;
    } else if (name == "student_t") {
      law.kind = lab::ErrorLaw::Kind::StudentT;
    } else {
      throw Error(ErrorKind::InvalidSpec, "unknown error law '" + name + "'");
    }
  } else if (key == "sim_sigma") {
    sim_block(config).spec.error.scale = typed<double>(value, key);
  } else if (key == "sim_nu") {
    sim_block(config).spec.error.nu = typed<double>(value, key);
  } else if (key == "sim_rho") {
    sim_block(config).spec.rho = typed<double>(value, key);
  } else if (key == "sim_c") {
    sim_block(config).spec.c = typed<double>(value, key);
  } else if (key == "sim_reps") {
    sim_block(config).reps = typed<std::size_t>(value, key);
  } else if (key == "sim_target") {
    sim_block(config).spec.target = lab::parse_target(typed<std::string>(value, key));
  } else if (key == "sim_eta") {
    sim_block(config).eta = typed<double>(value, key);
  } else {
    usage("unknown config key '" + key + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json config_echo(const RunConfig& config) {
  json echo = json::object();
  echo["command"] = std::string(to_string(config.command));
  echo["alpha"] = config.alpha;
  echo["method"] = std::string(to_string(config.method));
  echo["boot_b"] = config.bootstrap_b;
  echo["seed"] = config.seed;
  echo["intercept"] = config.intercept;
  echo["response"] = config.response_column;
  echo["input"] = config.input_path ? json(*config.input_path) : json(nullptr);
  if (config.sim) {
    const auto& s = config.sim->spec;
    echo["sim_n"] = s.n;
    echo["sim_d"] = s.d;
    echo["sim_family"] = std::string(lab::to_string(s.family));
    echo["sim_target"] = std::string(lab::to_string(s.target));
    const bool t = s.error.kind == lab::ErrorLaw::Kind::StudentT;
    echo["sim_error"] = t ? "student_t" : "gaussian";
    echo["sim_sigma"] = s.error.scale;
    if (t) echo["sim_nu"] = s.error.nu;
    echo["sim_rho"] = s.rho;
    echo["sim_c"] = s.c;
    echo["sim_reps"] = config.sim->reps;
    if (config.sim->eta) echo["sim_eta"] = *config.sim->eta;
  }
  return echo;
}

// ---- CSV ---------------------------------------------------------------------

std::vector<std::vector<std::string>> split_records(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t row = 1;
  std::size_t i = 0;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    field_started = false;
    ++row;
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw Error(ErrorKind::ParseError, "unexpected character after closing quote",
                      CellLocation{row, record.size() + 1});
        }
        continue;
      }
      field += ch;
      ++i;
      continue;
    }
    if (ch == '"') {
      if (field_started) {
        throw Error(ErrorKind::ParseError, "quote inside an unquoted field", CellLocation{row, record.size() + 1});
      }
      quoted = true;
      field_started = true;
      ++i;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = false;
      ++i;
    } else if (ch == '\r' || ch == '\n') {
      i += (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
      end_record();
    } else {
      field += ch;
      field_started = true;
      ++i;
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, "unterminated quoted field", CellLocation{row, record.size() + 1});
  if (field_started || !record.empty()) end_record();
  return records;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view raw, std::size_t row, std::size_t column) {
  std::string_view s = trim(raw);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::NonNumericCell, "cell '" + std::string(raw) + "' is not a number",
                CellLocation{row, column});
  }
  return v;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorKind::InvalidArgument, "failed writing '" + path + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::size_t response_index(const std::vector<std::string>& header, const std::string& response) {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == response) return j;
  }
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(response.data(), response.data() + response.size(), idx);
  if (ec == std::errc() && ptr == response.data() + response.size() && idx < header.size()) return idx;
  throw Error(ErrorKind::MissingColumn, "response column '" + response + "' not found");
}

// ---- commands ----------------------------------------------------------------

json run_fit(const RunConfig& config) {
  const CsvTable table = read_csv(*config.input_path);
  const Dataset data = dataset_from_table(table, config.response_column, config.intercept);
  const std::size_t resp = response_index(table.header, config.response_column);
  std::vector<std::string> names;
  if (config.intercept) names.emplace_back("(intercept)");
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j != resp) names.push_back(table.header[j]);
  }

  const ProjectionFit f = fit(data);
  const SandwichCov cov = sandwich_cov(f);
  const SimultaneousCI band = ci(f, cov, config.method, config.alpha, config.bootstrap_b, config.seed);

  json rows = json::array();
  for (Eigen::Index j = 0; j < data.d(); ++j) {
    rows.push_back({{"name", names[static_cast<std::size_t>(j)]},
                    {"estimate", f.beta_hat(j)},
                    {"std_err", cov.std_err(j)},
                    {"lower", band.lower(j)},
                    {"upper", band.upper(j)}});
  }
  return {{"n", data.n()},
          {"d", data.d()},
          {"response", table.header[resp]},
          {"columns", names},
          {"beta_hat", to_json(f.beta_hat)},
          {"std_err", to_json(cov.std_err)},
          {"method", std::string(to_string(band.method))},
          {"level", band.level},
          {"crit", band.crit},
          {"intervals", rows}};
}

json run_pcor(const RunConfig& config) {
  const CsvTable table = read_csv(*config.input_path);
  const PartialCorrFit f = pcor_fit(table.values);
  const PartialCorrCI band = pcor_ci(f, config.method, config.alpha, config.bootstrap_b, config.seed);
  json rows = json::array();
  for (const auto& iv : band.intervals) {
    rows.push_back({{"j", iv.j},
                    {"k", iv.k},
                    {"names", {table.header[static_cast<std::size_t>(iv.j)], table.header[static_cast<std::size_t>(iv.k)]}},
                    {"estimate", iv.estimate},
                    {"zeta", iv.zeta},
                    {"lower", iv.lower},
                    {"upper", iv.upper},
                    {"excludes_zero", iv.excludes_zero()}});
  }
  json edges = json::array();
  for (const auto& [j, k] : band.edges()) edges.push_back({j, k});
  return {{"n", f.n()},
          {"d", f.d()},
          {"columns", table.header},
          {"theta_hat", to_json(f.theta_hat)},
          {"method", std::string(to_string(band.method))},
          {"level", band.level},
          {"crit", band.crit},
          {"intervals", rows},
          {"edges", edges}};
}

lab::DGPSpec sim_spec(const RunConfig& config) {
  lab::DGPSpec spec = config.sim->spec;
  spec.intercept = config.intercept;
  spec.seed = config.seed;
  if (spec.error.kind == lab::ErrorLaw::Kind::Gaussian) spec.error.nu = 0.0;
  lab::validate(spec);
  return spec;
}

json run_simulate(const RunConfig& config) {
  const lab::DGPSpec spec = sim_spec(config);
  const lab::Simulator sim(spec);
  const std::vector<Method> methods{Method::Bonferroni, Method::Sidak, Method::Bootstrap};
  const auto table =
      lab::coverage_experiment(sim, methods, config.alpha, config.sim->reps, config.bootstrap_b, config.seed);
  json rows = json::object();
  for (const auto& row : table.rows) {
    rows[std::string(to_string(row.method))] = {{"covered", row.covered},
                                                {"valid", row.valid},
                                                {"coverage", row.coverage},
                                                {"mean_width", row.mean_width},
                                                {"median_width", row.median_width},
                                                {"mean_width_sqrt_n", row.mean_width_sqrt_n}};
  }
  return {{"target", std::string(lab::to_string(table.target))},
          {"n", table.n},
          {"d", table.d},
          {"alpha", table.alpha},
          {"reps", table.reps},
          {"skipped", table.skipped},
          {"truth_source", sim.truth().v_source == OracleTruth::VSource::ClosedForm ? "closed_form" : "brute_force"},
          {"methods", rows}};
}

json run_verify(const RunConfig& config) {
  const lab::DGPSpec spec = sim_spec(config);
  if (spec.target != lab::Target::Projection) {
    throw Error(ErrorKind::InvalidSpec, "verify works on the projection target only");
  }
  const lab::Simulator sim(spec);
  const auto report = lab::verify_deterministic_bounds(config.sim->reps, sim, config.sim->eta);
  json out = {{"reps", report.reps},
              {"valid", report.valid},
              {"skipped_large_deviation", report.skipped_large_deviation},
              {"skipped_singular", report.skipped_singular},
              {"theorem_violations", report.theorem_violations},
              {"corollary_violations", report.corollary_violations},
              {"violations", report.violations()},
              {"max_theorem_ratio", report.max_theorem_ratio},
              {"max_corollary_ratio", report.max_corollary_ratio},
              {"eta_n", report.eta_n ? json(*report.eta_n) : json("realized")}};
  if (report.eta_n) {
    out["event_count"] = report.event_count;
    out["event_frequency"] =
        report.valid > 0 ? static_cast<double>(report.event_count) / static_cast<double>(report.valid) : 0.0;
  }
  return out;
}

void report_error(std::ostream& err, ErrorKind kind, const std::string& message,
                  const std::optional<CellLocation>& where) {
  json obj = {{"kind", std::string(to_string(kind))}, {"message", message}};
  if (where) {
    obj["row"] = where->row;
    obj["column"] = where->column;
  }
  err << canonical(json{{"error", obj}}) << '\n';
}

}  // namespace

void validate(const RunConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    throw Error(ErrorKind::InvalidLevel, "alpha must lie in (0, 1)");
  }
  if (config.bootstrap_b < 1) throw Error(ErrorKind::InvalidArgument, "boot_b must be at least 1");
  if (config.threads && *config.threads < 1) throw Error(ErrorKind::InvalidArgument, "threads must be positive");
  switch (config.command) {
    case Command::Fit:
    case Command::Pcor:
      if (!config.input_path) usage(std::string(to_string(config.command)) + " requires --input");
      break;
    case Command::Simulate:
    case Command::Verify:
      if (!config.sim) usage(std::string(to_string(config.command)) + " requires sim_* keys in the config file");
      if (config.sim->reps < 1) throw Error(ErrorKind::InvalidArgument, "sim_reps must be at least 1");
      break;
  }
}

void apply_config_text(const std::string& text, RunConfig& config) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "config must be a flat JSON object");
  for (const auto& [key, value] : doc.items()) apply_key(key, value, config);
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Assumption-lean regression inference", "leanreg"};
  std::string command;
  std::string config_path;
  std::string input;
  std::string response;
  double alpha = 0.0;
  std::string method;
  std::size_t boot_b = 0;
  std::uint64_t seed = 0;
  std::string output;
  int threads = 0;
  app.add_option("command", command, "fit | pcor | simulate | verify")->required();
  app.add_option("--config", config_path, "flat JSON config file");
  app.add_option("--input", input, "CSV input with header");
  app.add_option("--response", response, "response column name or 0-based index");
  app.add_option("--alpha", alpha, "1 - confidence level");
  app.add_option("--method", method, "bonferroni | sidak | bootstrap");
  app.add_option("--boot-b", boot_b, "bootstrap draws");
  app.add_option("--seed", seed, "64-bit seed");
  app.add_flag("--no-intercept", "do not prepend an intercept column");
  app.add_option("--output", output, "write the report here instead of stdout");
  app.add_option("--threads", threads, "worker threads (results do not depend on it)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);  // CLI11 consumes a reversed vector

  RunConfig config;
  if (!config_path.empty()) apply_config_text(read_file(config_path), config);
  config.command = parse_command(command);
  if (app.count("--input") > 0) config.input_path = input;
  if (app.count("--response") > 0) config.response_column = response;
  if (app.count("--alpha") > 0) config.alpha = alpha;
  if (app.count("--method") > 0) config.method = parse_method(method);
  if (app.count("--boot-b") > 0) config.bootstrap_b = boot_b;
  if (app.count("--seed") > 0) config.seed = seed;
  if (app.count("--no-intercept") > 0) config.intercept = false;
  if (app.count("--output") > 0) config.output_path = output;
  if (app.count("--threads") > 0) config.threads = threads;
  return config;
}

CsvTable parse_csv(const std::string& text) {
  auto records = split_records(text);
  if (records.empty()) throw Error(ErrorKind::EmptyInput, "CSV input has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& name : table.header) name = std::string(trim(name));
  const std::size_t cols = table.header.size();
  const std::size_t rows = records.size() - 1;
  if (rows == 0) throw Error(ErrorKind::EmptyInput, "CSV input has no data rows");
  table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& rec = records[i + 1];
    if (rec.size() != cols) {
      throw Error(ErrorKind::ParseError,
                  "expected " + std::to_string(cols) + " fields, found " + std::to_string(rec.size()),
                  CellLocation{i + 2, std::min(rec.size(), cols) + 1});
    }
    for (std::size_t j = 0; j < cols; ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_cell(rec[j], i + 2, j + 1);
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

Dataset dataset_from_table(const CsvTable& table, const std::string& response_column, bool intercept) {
  const std::size_t resp = response_index(table.header, response_column);
  const Eigen::Index n = table.values.rows();
  const Eigen::Index p = table.values.cols() - 1;
  Matrix cov(n, p);
  Eigen::Index out = 0;
  for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
    if (static_cast<std::size_t>(j) == resp) continue;
    cov.col(out++) = table.values.col(j);
  }
  return Dataset::from_covariates(cov, table.values.col(static_cast<Eigen::Index>(resp)), intercept);
}

Dataset ingest_csv(const std::string& path, const std::string& response_column, bool intercept) {
  return dataset_from_table(read_csv(path), response_column, intercept);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::string text;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j > 0) text += ',';
    text += csv_field(table.header[j]);
  }
  text += '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      if (j > 0) text += ',';
      format_double(table.values(i, j), text);
    }
    text += '\n';
  }
  write_text(path, text);
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  const Eigen::Index off = data.intercept() ? 1 : 0;
  const Eigen::Index p = data.d() - off;
  CsvTable table;
  table.header.emplace_back("y");
  for (Eigen::Index j = 1; j <= p; ++j) table.header.push_back("x" + std::to_string(j));
  table.values.resize(data.n(), p + 1);
  table.values.col(0) = data.y();
  table.values.rightCols(p) = data.x().rightCols(p);
  write_csv(path, table);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
#ifdef _OPENMP
    if (config.threads) omp_set_num_threads(*config.threads);
#endif
    json results;
    switch (config.command) {
      case Command::Fit: results = run_fit(config); break;
      case Command::Pcor: results = run_pcor(config); break;
      case Command::Simulate: results = run_simulate(config); break;
      case Command::Verify: results = run_verify(config); break;
    }
    const json report = {{"tool_version", kToolVersion},
                         {"config_echo", config_echo(config)},
                         {"seed", config.seed},
                         {"results", results}};
    const std::string text = canonical(report) + "\n";
    if (config.output_path) {
      write_text(*config.output_path, text);
    } else {
      out << text;
    }
    return 0;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what(), e.location());
    return is_numerical(e.kind()) ? 2 : 1;
  } catch (const std::bad_alloc&) {
    report_error(err, ErrorKind::Internal, "out of memory", std::nullopt);
    return 2;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const CLI::CallForHelp&) {
    out << "usage: leanreg fit|pcor|simulate|verify [--config PATH] [--input PATH] [--response NAME]\n"
           "                [--alpha F] [--method bonferroni|sidak|bootstrap] [--boot-b N] [--seed N]\n"
           "                [--no-intercept] [--output PATH] [--threads N]\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, ErrorKind::Usage, e.what(), std::nullopt);
    return 1;
  } catch (const Error& e) {
    report_error(err, e.kind(), e.what(), e.location());
    return is_numerical(e.kind()) ? 2 : 1;
  }
  return run(config, out, err);
}

}  // namespace leanreg::cli
