#include "pcgraph/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

namespace pcgraph::io {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_number(std::string_view text, double& value) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  }
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  }
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, source + ": " + e.what());
  }
}

[[noreturn]] void bad_field(const std::string& source, const std::string& field,
                            const std::string& what) {
  throw Error(ErrorCode::Parse, source + ": field '" + field + "' " + what);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& source) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad_field(source, key, "has the wrong type");
  }
}

std::vector<Index> one_based_list(const json& obj, const char* key,
                                  const std::string& source) {
  if (!obj.contains(key) || !obj.at(key).is_array()) {
    bad_field(source, key, "must be a list of 1-based node indices");
  }
  std::vector<Index> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number_integer()) bad_field(source, key, "must contain integers");
    out.push_back(v.get<Index>() - 1);
  }
  return out;
}

json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

CommunitySpec community_from_json(const json& j, const std::string& source) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, source + ": graph spec must be an object");
  CommunitySpec spec;
  spec.blocks = get_or(j, "blocks", spec.blocks, source);
  spec.weight_min = get_or(j, "weight_min", spec.weight_min, source);
  spec.weight_max = get_or(j, "weight_max", spec.weight_max, source);
  spec.inter_edges = get_or(j, "inter_edges", spec.inter_edges, source);
  spec.bidirectional = get_or(j, "bidirectional", spec.bidirectional, source);
  spec.variance_max = get_or(j, "variance_max", spec.variance_max, source);
  spec.seed = get_or(j, "seed", spec.seed, source);
  spec.max_retries = get_or(j, "max_retries", spec.max_retries, source);
  spec.validate();
  return spec;
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value < 0 ? "-inf" : "inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Table read_table(std::istream& in, const std::string& source) {
  Table table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      numeric = numeric && parse_number(fields[k], row[k]);
    }
    if (!numeric) {
      if (rows.empty() && table.header.empty()) {
        for (auto f : fields) table.header.emplace_back(f);
        width = fields.size();
        continue;
      }
      throw Error(ErrorCode::Parse,
                  source + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (width == 0) width = row.size();
    if (row.size() != width) {
      throw Error(ErrorCode::Parse, source + ":" + std::to_string(line_no) +
                                        ": expected " + std::to_string(width) +
                                        " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      table.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return table;
}

Table read_table(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_table(in, path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  auto table = read_table(path);
  if (table.values.rows() == 0) {
    throw Error(ErrorCode::Parse, path.string() + ": dataset has no rows");
  }
  try {
    return Dataset(std::move(table.values));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const Matrix& values,
                  const std::vector<std::string>& header) {
  for (std::size_t k = 0; k < header.size(); ++k) {
    out << (k ? "," : "") << header[k];
  }
  if (!header.empty()) out << '\n';
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      out << (c ? "," : "") << format_double(values(r, c));
    }
    out << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const Dataset& data,
                   const std::vector<std::string>& header) {
  auto out = open_out(path);
  write_matrix(out, data.samples(), header);
}

WeightedGraph read_graph(std::istream& in, const std::string& source) {
  auto table = read_table(in, source);
  const bool edge_header = table.header.size() == 3 && table.header[0] == "i" &&
                           table.header[1] == "j";
  const bool edge_shape = table.values.cols() == 3 && table.values.rows() != 3;
  try {
    if (edge_header || (table.header.empty() && edge_shape)) {
      Index p = 0;
      for (Index r = 0; r < table.values.rows(); ++r) {
        for (Index c = 0; c < 2; ++c) {
          const double v = table.values(r, c);
          if (v < 1 || v != std::floor(v)) {
            throw Error(ErrorCode::Parse, source + ": edge row " + std::to_string(r + 1) +
                                              " has an invalid node index");
          }
          p = std::max(p, static_cast<Index>(v));
        }
      }
      Matrix w = Matrix::Zero(p, p);
      for (Index r = 0; r < table.values.rows(); ++r) {
        w(static_cast<Index>(table.values(r, 0)) - 1,
          static_cast<Index>(table.values(r, 1)) - 1) = table.values(r, 2);
      }
      return WeightedGraph(std::move(w));
    }
    if (!table.header.empty() && table.header.size() != static_cast<std::size_t>(table.values.cols())) {
      throw Error(ErrorCode::Parse, source + ": unrecognised graph header");
    }
    if (table.values.rows() != table.values.cols()) {
      throw Error(ErrorCode::DimensionMismatch,
                  source + ": dense graph must be square, found " +
                      std::to_string(table.values.rows()) + "x" +
                      std::to_string(table.values.cols()));
    }
    return WeightedGraph(std::move(table.values));
  } catch (const Error& e) {
    if (std::string_view(e.what()).starts_with(source)) throw;
    throw Error(e.code(), source + ": " + e.what());
  }
}

WeightedGraph read_graph(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_graph(in, path.string());
}

void write_graph_dense(std::ostream& out, const WeightedGraph& graph) {
  write_matrix(out, graph.weights());
}

void write_graph_edges(std::ostream& out, const WeightedGraph& graph) {
  out << "i,j,w_ij\n";
  const Index p = graph.nodes();
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (i != j && graph(i, j) != 0.0) {
        out << i + 1 << ',' << j + 1 << ',' << format_double(graph(i, j)) << '\n';
      }
    }
  }
  out << p << ',' << p << ",0\n";
}

std::filesystem::path edge_list_path(const std::filesystem::path& path) {
  auto out = path;
  out.replace_extension();
  out += ".edges.csv";
  return out;
}

void write_graph(const std::filesystem::path& path, const WeightedGraph& graph) {
  {
    auto out = open_out(path);
    write_graph_dense(out, graph);
  }
  auto edges = open_out(edge_list_path(path));
  write_graph_edges(edges, graph);
}

GeoCoordinates read_coordinates(const std::filesystem::path& path) {
  auto in = open_in(path);
  GeoCoordinates coords;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split_fields(t);
    if (fields.size() != 3) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) +
                                        ": expected name,lat,lon");
    }
    double lat = 0.0;
    double lon = 0.0;
    if (!parse_number(fields[1], lat) || !parse_number(fields[2], lon)) {
      if (coords.latitude.empty() && coords.names.empty()) continue;  // header
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) +
                                        ": non-numeric coordinate");
    }
    coords.names.emplace_back(fields[0]);
    coords.latitude.push_back(lat);
    coords.longitude.push_back(lon);
  }
  try {
    coords.validate();
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  return coords;
}

FeatureVectors read_features(const std::filesystem::path& path) {
  FeatureVectors f{read_table(path).values};
  try {
    f.validate();
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
  return f;
}

NodeSplit parse_split(const std::string& json_text, Index nodes,
                      const std::string& source) {
  const json j = parse_json(json_text, source);
  if (!j.is_object()) throw Error(ErrorCode::Parse, source + ": split must be an object");
  try {
    return NodeSplit(one_based_list(j, "observed", source),
                     one_based_list(j, "targets", source), nodes);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(e.code(), source + ": " + e.what());
  }
}

NodeSplit read_split(const std::filesystem::path& path, Index nodes) {
  return parse_split(slurp(path), nodes, path.string());
}

std::string split_to_json(const NodeSplit& split) {
  json j;
  j["observed"] = json::array();
  j["targets"] = json::array();
  for (Index v : split.observed()) j["observed"].push_back(v + 1);
  for (Index v : split.targets()) j["targets"].push_back(v + 1);
  return j.dump();
}

CommunitySpec parse_community_spec(const std::string& json_text,
                                   const std::string& source) {
  return community_from_json(parse_json(json_text, source), source);
}

CommunitySpec read_community_spec(const std::filesystem::path& path) {
  return parse_community_spec(slurp(path), path.string());
}

LoadedExperiment parse_experiment(const std::string& json_text,
                                  const std::filesystem::path& base_dir,
                                  const std::string& source) {
  const json j = parse_json(json_text, source);
  if (!j.is_object()) throw Error(ErrorCode::Parse, source + ": config must be an object");

  auto path_field = [&](const char* key) {
    const auto value = get_or<std::string>(j, key, "", source);
    if (value.empty()) bad_field(source, key, "is empty; set it to a file path");
    return resolve(base_dir, value);
  };

  std::optional<ExperimentSource> data_source;
  Index nodes = 0;
  if (j.contains("synthetic")) {
    SyntheticSource synth;
    synth.graph = community_from_json(j.at("synthetic"), source + " (synthetic)");
    synth.samples = get_or<Index>(j.at("synthetic"), "samples", synth.samples, source);
    if (synth.samples < 2) bad_field(source, "synthetic.samples", "must be >= 2");
    nodes = synth.graph.nodes();
    data_source = synth;
  } else {
    if (!j.contains("data")) {
      throw Error(ErrorCode::Parse, source + ": needs either 'synthetic' or 'data'");
    }
    DatasetSource ds{read_dataset(path_field("data")), std::nullopt};
    if (j.contains("true_graph")) ds.truth = read_graph(path_field("true_graph"));
    nodes = ds.data.nodes();
    data_source = std::move(ds);
  }

  ExperimentConfig cfg;
  if (!j.contains("methods") || !j.at("methods").is_array()) {
    bad_field(source, "methods", "must be a list");
  }
  for (const auto& m : j.at("methods")) {
    if (m.is_string()) {
      const auto name = m.get<std::string>();
      if (name == "spice") cfg.methods.push_back(MethodSpec::spice());
      else if (name == "ls") cfg.methods.push_back(MethodSpec::ls());
      else if (name == "true") cfg.methods.push_back(MethodSpec::truth());
      else bad_field(source, "methods", "has unknown method '" + name + "'");
    } else if (m.is_object() && m.contains("reference")) {
      const auto file = m.at("reference").get<std::string>();
      if (file.empty()) bad_field(source, "methods.reference", "is empty; set it to a graph file");
      cfg.methods.push_back({MethodKind::Reference,
                             get_or<std::string>(m, "name", "reference", source),
                             read_graph(resolve(base_dir, file))});
    } else if (m.is_object() && m.contains("true")) {
      const auto file = m.at("true").get<std::string>();
      if (file.empty()) bad_field(source, "methods.true", "is empty; set it to a graph file");
      cfg.methods.push_back({MethodKind::Truth, get_or<std::string>(m, "name", "true", source),
                             read_graph(resolve(base_dir, file))});
    } else {
      bad_field(source, "methods", "entries must be a name or {\"reference\": path}");
    }
  }

  cfg.n_grid = get_or<std::vector<Index>>(j, "n_grid", {}, source);
  cfg.repetitions = get_or(j, "repetitions", cfg.repetitions, source);
  const auto fractions = get_or<std::vector<double>>(j, "fractions", {0.5, 0.5}, source);
  if (fractions.size() != 2) bad_field(source, "fractions", "must have two entries");
  cfg.fractions = {fractions[0], fractions[1]};
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0, source);
  cfg.threads = get_or(j, "threads", cfg.threads, source);
  const auto center = get_or<std::string>(j, "center_mode", "train", source);
  if (center == "train") cfg.center_mode = CenterMode::Train;
  else if (center == "each") cfg.center_mode = CenterMode::Each;
  else bad_field(source, "center_mode", "must be 'train' or 'each'");
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    cfg.solver.tol = get_or(s, "tol", cfg.solver.tol, source);
    cfg.solver.max_sweeps = get_or(s, "max_sweeps", cfg.solver.max_sweeps, source);
    cfg.solver.residual_floor = get_or(s, "residual_floor", cfg.solver.residual_floor, source);
  }
  if (!j.contains("split")) bad_field(source, "split", "is required");
  if (j.at("split").is_string()) {
    cfg.split = read_split(path_field("split"), nodes);
  } else {
    cfg.split = parse_split(j.at("split").dump(), nodes, source + " (split)");
  }
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.what());
  }
  return LoadedExperiment{std::move(cfg), std::move(*data_source), j.dump()};
}

LoadedExperiment read_experiment(const std::filesystem::path& path) {
  return parse_experiment(slurp(path), path.parent_path(), path.string());
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "method,N,npe,npe_db,npe_se,nmse,nmse_raw,nnz,wall_ms\n";
  for (const auto& r : report.rows) {
    out << r.method << ',' << r.n << ',' << format_double(r.npe) << ','
        << format_double(r.npe_db) << ',' << format_double(r.npe_se) << ','
        << format_double(r.nmse) << ',' << format_double(r.nmse_raw) << ','
        << format_double(r.nnz) << ',' << format_double(r.wall_ms) << '\n';
  }
}

void write_report_json(std::ostream& out, const EvalReport& report,
                       const std::string& config_json) {
  json doc;
  doc["config"] = config_json.empty() ? json(nullptr) : json::parse(config_json);
  doc["rows"] = json::array();
  for (const auto& r : report.rows) {
    doc["rows"].push_back({{"method", r.method},
                           {"N", r.n},
                           {"npe", number_json(r.npe)},
                           {"npe_db", number_json(r.npe_db)},
                           {"npe_se", number_json(r.npe_se)},
                           {"nmse", number_json(r.nmse)},
                           {"nmse_se", number_json(r.nmse_se)},
                           {"nmse_raw", number_json(r.nmse_raw)},
                           {"support_recovery", number_json(r.recovery)},
                           {"nnz", number_json(r.nnz)},
                           {"wall_ms", number_json(r.wall_ms)}});
  }
  out << doc.dump(2) << '\n';
}

std::string node_diagnostics_json(const NodeSolveState& state,
                                  const Certificate& certificate) {
  json j{{"node", state.node + 1},
         {"sweeps", state.sweeps},
         {"converged", state.converged},
         {"objective", number_json(state.objective)},
         {"certificate_residual", number_json(certificate.max_violation)},
         {"certificate_holds", certificate.holds},
         {"nonzeros", (state.weights.array() != 0.0).count()}};
  return j.dump();
}

}  // namespace pcgraph::io
