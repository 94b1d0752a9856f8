#include <gtest/gtest.h>

#include <pcgraph/io.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace pcgraph;
namespace orc = pcgraph::oracle;
using pcgraph::testing::TempDir;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected pcgraph::Error";
  return ErrorCode::InvalidArgument;
}

WeightedGraph random_graph(Index p, std::mt19937_64& rng) {
  Matrix w = orc::random_matrix(p, p, rng) / 3.0;
  w.diagonal().setZero();
  w(0, p - 1) = 0.0;
  return WeightedGraph(w);
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    const double v = u(rng) * std::pow(10.0, static_cast<double>(t % 40 - 20));
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(ReadTable, HeaderCommentsAndBlankLines) {
  std::istringstream in("# comment\na,b\n1,2\n\n3, 4.5\n");
  const auto t = io::read_table(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.values.rows(), 2);
  EXPECT_EQ(t.values(1, 1), 4.5);
  std::istringstream bare("1,2,3\n4,5,6\n");
  const auto u = io::read_table(bare);
  EXPECT_TRUE(u.header.empty());
  EXPECT_EQ(u.values.rows(), 2);
}

TEST(ReadTable, ErrorsNameTheLine) {
  std::istringstream ragged("1,2\n3\n");
  try {
    io::read_table(ragged, "x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("x.csv:2"), std::string::npos) << e.what();
  }
  std::istringstream bad("1,2\n3,abc\n");
  EXPECT_EQ(code_of([&] { io::read_table(bad); }), ErrorCode::Parse);
}

TEST(GraphFiles, DenseRoundTripIsBitExact) {
  std::mt19937_64 rng(52);
  const auto g = random_graph(7, rng);
  std::stringstream s;
  io::write_graph_dense(s, g);
  EXPECT_TRUE(io::read_graph(s) == g);
}

TEST(GraphFiles, EdgeListRoundTripIsBitExact) {
  std::mt19937_64 rng(53);
  Matrix w = Matrix::Zero(5, 5);
  w(1, 0) = 0.1 + 1e-17;
  w(3, 2) = -2.0 / 3.0;
  const WeightedGraph g(w);  // nodes 5 is isolated
  std::stringstream s;
  io::write_graph_edges(s, g);
  EXPECT_EQ(s.str().substr(0, 8), "i,j,w_ij");
  EXPECT_TRUE(io::read_graph(s) == g);
  const auto r = random_graph(4, rng);
  std::stringstream s2;
  io::write_graph_edges(s2, r);
  EXPECT_TRUE(io::read_graph(s2) == r);
}

TEST(GraphFiles, WriteGraphEmitsBothForms) {
  TempDir dir;
  std::mt19937_64 rng(54);
  const auto g = random_graph(6, rng);
  const auto path = dir / "g.csv";
  io::write_graph(path, g);
  EXPECT_TRUE(io::read_graph(path) == g);
  EXPECT_TRUE(io::read_graph(io::edge_list_path(path)) == g);
}

TEST(GraphFiles, InvalidGraphsRejected) {
  std::istringstream diag("1,0\n0,0\n");
  EXPECT_EQ(code_of([&] { io::read_graph(diag); }), ErrorCode::NonZeroDiagonal);
  std::istringstream rect("0,1,2\n1,0,2\n");
  EXPECT_THROW(io::read_graph(rect), Error);
  std::istringstream self_loop("i,j,w_ij\n1,1,0.5\n2,2,0\n");
  EXPECT_THROW(io::read_graph(self_loop), Error);
}

TEST(DatasetFiles, RoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(55);
  const Dataset d(orc::random_matrix(20, 4, rng));
  io::write_dataset(dir / "d.csv", d, {"a", "b", "c", "d"});
  EXPECT_EQ(io::read_dataset(dir / "d.csv").samples(), d.samples());
  EXPECT_EQ(code_of([&] { io::read_dataset(dir / "missing.csv"); }), ErrorCode::Io);
  dir.write("nan.csv", "1,2\nnan,3\n");
  EXPECT_THROW(io::read_dataset(dir / "nan.csv"), Error);
}

TEST(Coordinates, ReadWithNames) {
  TempDir dir;
  const auto p = dir.write("c.csv", "name,lat,lon\nStockholm,59.33,18.07\nGothenburg,57.71,11.97\n");
  const auto c = io::read_coordinates(p);
  ASSERT_EQ(c.nodes(), 2);
  EXPECT_EQ(c.names[1], "Gothenburg");
  EXPECT_DOUBLE_EQ(c.longitude[0], 18.07);
  dir.write("bad.csv", "a,100,0\nb,0,0\n");
  EXPECT_THROW(geodesic_graph(io::read_coordinates(dir / "bad.csv")), Error);
}

TEST(Split, OneBasedJson) {
  const auto s = io::parse_split(R"({"observed": [2, 4], "targets": [1]})", 4);
  EXPECT_EQ(s.observed(), (std::vector<Index>{1, 3}));
  EXPECT_EQ(s.targets(), (std::vector<Index>{0}));
  EXPECT_EQ(io::parse_split(io::split_to_json(s), 4).observed(), s.observed());
  EXPECT_THROW(io::parse_split(R"({"observed": [0], "targets": [1]})", 4), Error);
  EXPECT_THROW(io::parse_split(R"({"observed": [5], "targets": [1]})", 4), Error);
  EXPECT_EQ(code_of([] { io::parse_split(R"({"observed": [1]})", 4); }), ErrorCode::Parse);
  EXPECT_EQ(code_of([] { io::parse_split("{", 4); }), ErrorCode::Parse);
}

TEST(CommunitySpecJson, DefaultsAndOverrides) {
  const auto d = io::parse_community_spec("{}");
  EXPECT_EQ(d.blocks, (std::vector<Index>{5, 5}));
  const auto s = io::parse_community_spec(R"({"blocks": [3, 4, 2], "weight_max": 0.5, "seed": 9})");
  EXPECT_EQ(s.nodes(), 9);
  EXPECT_EQ(s.weight_max, 0.5);
  EXPECT_EQ(s.seed, 9u);
  EXPECT_EQ(code_of([] { io::parse_community_spec(R"({"blocks": "five"})"); }), ErrorCode::Parse);
  EXPECT_THROW(io::parse_community_spec(R"({"weight_max": 1.5})"), Error);
}

TEST(ExperimentJson, ShippedSyntheticConfig) {
  const auto loaded = io::read_experiment(PCGRAPH_CONFIG_DIR "/synth_fig2.json");
  const auto& cfg = loaded.config;
  ASSERT_EQ(cfg.methods.size(), 3u);
  EXPECT_EQ(cfg.methods[2].kind, MethodKind::Truth);
  EXPECT_EQ(cfg.n_grid, (std::vector<Index>{100, 1000, 10000}));
  EXPECT_EQ(cfg.repetitions, 100);
  EXPECT_EQ(cfg.split->observed(), (std::vector<Index>{1, 3, 5, 7, 9}));
  const auto& synth = std::get<SyntheticSource>(loaded.source);
  EXPECT_EQ(synth.samples, 20000);
  EXPECT_EQ(synth.graph.nodes(), 10);
}

TEST(ExperimentJson, TemplatesNameTheMissingPath) {
  for (const char* name : {"temperature.json", "eeg.json", "cytometry.json"}) {
    try {
      io::read_experiment(std::string(PCGRAPH_CONFIG_DIR "/") + name);
      FAIL() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Parse);
      EXPECT_NE(std::string(e.what()).find("'data'"), std::string::npos) << e.what();
    }
  }
}

TEST(ExperimentJson, DataSourceWithReferenceGraph) {
  TempDir dir;
  std::mt19937_64 rng(56);
  io::write_dataset(dir / "d.csv", Dataset(orc::random_matrix(50, 3, rng)));
  io::write_graph(dir / "ref.csv", WeightedGraph::zeros(3));
  const auto loaded = io::parse_experiment(R"({
      "data": "d.csv",
      "methods": ["spice", {"reference": "ref.csv", "name": "zero"}],
      "n_grid": [10, 20], "repetitions": 2,
      "split": {"observed": [1], "targets": [2, 3]},
      "solver": {"tol": 1e-8, "max_sweeps": 50},
      "center_mode": "each"})",
                                           dir.path());
  EXPECT_EQ(loaded.config.methods[1].name, "zero");
  EXPECT_EQ(loaded.config.solver.max_sweeps, 50);
  EXPECT_EQ(loaded.config.center_mode, CenterMode::Each);
  const auto report = run_experiment(loaded.config, loaded.source);
  EXPECT_EQ(report.row("zero", 20).npe, 1.0);

  EXPECT_THROW(io::parse_experiment(R"({"data": "d.csv", "methods": ["magic"], "n_grid": [10],
      "split": {"observed": [1], "targets": [2]}})", dir.path()), Error);
}

TEST(Report, CsvAndJson) {
  EvalReport report;
  ReportRow row;
  row.method = "spice";
  row.n = 100;
  row.npe = 0.5;
  row.npe_db = to_db(0.5);
  row.nmse = std::numeric_limits<double>::quiet_NaN();
  report.rows.push_back(row);
  std::ostringstream csv;
  io::write_report_csv(csv, report);
  const auto text = csv.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "method,N,npe,npe_db,npe_se,nmse,nmse_raw,nnz,wall_ms");
  EXPECT_NE(text.find("spice,100,0.5,"), std::string::npos);
  std::ostringstream js;
  io::write_report_json(js, report, "{\"seed\":1}");
  EXPECT_NE(js.str().find("\"nmse\": null"), std::string::npos) << js.str();
  EXPECT_NE(js.str().find("\"config\""), std::string::npos);
}
