#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "netsel/datamodel.hpp"

namespace fs = std::filesystem;
using namespace netsel;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("netsel_dm_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = (path_ / name).string();
    std::ofstream(p) << contents;
    return p;
  }
  std::string path(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class Fn>
Error capture(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected netsel::Error";
  return Error(ErrorKind::io, "none");
}

}  // namespace

TEST(LoadFeatureMatrix, WellFormed) {
  TempDir dir;
  const auto p = dir.file("x.tsv",
                          "sample_id\tf1\tf2\n"
                          "s1\t1.5\t-2\n"
                          "s2\t3e-2\t+4\n"
                          "s3\t0\t1E3\n");
  const auto x = load_feature_matrix(p);
  EXPECT_EQ(x.n(), 3);
  EXPECT_EQ(x.m(), 2);
  EXPECT_EQ(x.feature_ids(), (std::vector<std::string>{"f1", "f2"}));
  EXPECT_EQ(x.sample_ids(), (std::vector<std::string>{"s1", "s2", "s3"}));
  EXPECT_DOUBLE_EQ(x.values()(1, 0), 0.03);
  EXPECT_DOUBLE_EQ(x.values()(1, 1), 4.0);
  EXPECT_DOUBLE_EQ(x.values()(2, 1), 1000.0);
}

TEST(LoadFeatureMatrix, RaggedRowNamesTheRow) {
  TempDir dir;
  const auto p = dir.file("x.tsv",
                          "sample_id\tf1\tf2\n"
                          "s1\t1\n"
                          "s2\t1\t2\n");
  const auto e = capture([&] { load_feature_matrix(p); });
  EXPECT_EQ(e.kind(), ErrorKind::ragged_row);
  EXPECT_EQ(e.row(), 2u);
}

TEST(LoadFeatureMatrix, DuplicateFeatureHeader) {
  TempDir dir;
  const auto p = dir.file("x.tsv", "sample_id\tf1\tf1\ns1\t1\t2\ns2\t1\t2\n");
  const auto e = capture([&] { load_feature_matrix(p); });
  EXPECT_EQ(e.kind(), ErrorKind::duplicate_id);
  EXPECT_EQ(e.row(), 1u);
  EXPECT_EQ(e.column(), 3u);
}

TEST(LoadFeatureMatrix, DuplicateSample) {
  TempDir dir;
  const auto p = dir.file("x.tsv", "sample_id\tf1\ns1\t1\ns1\t2\n");
  EXPECT_EQ(capture([&] { load_feature_matrix(p); }).kind(),
            ErrorKind::duplicate_id);
}

TEST(LoadFeatureMatrix, NonNumericCellHasLocation) {
  TempDir dir;
  const auto p = dir.file("x.tsv", "sample_id\tf1\tf2\ns1\t1\t2\ns2\t1\tNA\n");
  const auto e = capture([&] { load_feature_matrix(p); });
  EXPECT_EQ(e.kind(), ErrorKind::non_numeric);
  EXPECT_EQ(e.row(), 3u);
  EXPECT_EQ(e.column(), 3u);
}

TEST(LoadFeatureMatrix, MalformedHeader) {
  TempDir dir;
  EXPECT_EQ(capture([&] { load_feature_matrix(dir.file("a.tsv", "sample_id\n")); })
                .kind(),
            ErrorKind::malformed_header);
  EXPECT_EQ(capture([&] { load_feature_matrix(dir.file("b.tsv", "")); }).kind(),
            ErrorKind::malformed_header);
}

TEST(LoadFeatureMatrix, MissingFile) {
  EXPECT_EQ(capture([] { load_feature_matrix("/nonexistent/x.tsv"); }).kind(),
            ErrorKind::io);
}

TEST(FeatureMatrixRoundTrip, ExactValuesAndOrder) {
  TempDir dir;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  Matrix v(5, 4);
  for (Index i = 0; i < v.size(); ++i) v.data()[i] = normal(rng) * 1e3;
  v(0, 0) = 0.1;
  v(1, 1) = 1e-310;  // subnormal
  const FeatureMatrix x({"a", "b", "c", "d", "e"}, {"z9", "a1", "m5", "b2"}, v);
  write_feature_matrix(x, dir.path("x.tsv"));
  const auto back = load_feature_matrix(dir.path("x.tsv"));
  EXPECT_EQ(back.feature_ids(), x.feature_ids());
  EXPECT_EQ(back.sample_ids(), x.sample_ids());
  EXPECT_TRUE((back.values().array() == v.array()).all());
}

TEST(NetworkRoundTrip, ExactWeights) {
  TempDir dir;
  const auto g = WeightedNetwork({"a", "b", "c"},
                                 {{0, 1, 1.0 / 3.0}, {2, 1, 2.5e-7}});
  write_network(g, dir.path("n.tsv"));
  const auto back = load_network(dir.path("n.tsv"), g.node_ids());
  EXPECT_EQ(back.edges(), g.edges());
}

TEST(LoadNetwork, DefaultWeightAndIsolatedNode) {
  TempDir dir;
  const auto g = load_network(dir.file("n.tsv", "a\tb\t2.0\n"), {"a", "b", "c"});
  ASSERT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 2.0}));
  EXPECT_TRUE(g.neighbors(2).empty());
  const auto h = load_network(dir.file("m.tsv", "c\ta\n"), {"a", "b", "c"});
  EXPECT_EQ(h.edges()[0], (Edge{0, 2, 1.0}));
}

TEST(LoadNetwork, Errors) {
  TempDir dir;
  const std::vector<std::string> u{"a", "b", "c"};
  EXPECT_EQ(capture([&] { load_network(dir.file("1", "a\ta\t1.0\n"), u); }).kind(),
            ErrorKind::self_loop);
  EXPECT_EQ(capture([&] { load_network(dir.file("2", "a\tb\nb\ta\n"), u); }).kind(),
            ErrorKind::duplicate_edge);
  EXPECT_EQ(capture([&] { load_network(dir.file("3", "a\tq\n"), u); }).kind(),
            ErrorKind::unknown_id);
  EXPECT_EQ(capture([&] { load_network(dir.file("4", "a\tb\t0\n"), u); }).kind(),
            ErrorKind::non_positive_weight);
  EXPECT_EQ(capture([&] { load_network(dir.file("5", "a\tb\t-1\n"), u); }).kind(),
            ErrorKind::non_positive_weight);
}

TEST(LoadPhenotype, OptionalHeader) {
  TempDir dir;
  const auto y = load_phenotype(dir.file("y.tsv", "sample_id\tvalue\ns1\t1\ns2\t2\n"));
  EXPECT_EQ(y.n(), 2);
  const auto z = load_phenotype(dir.file("z.tsv", "s1\t1\ns2\t2\n"));
  EXPECT_EQ(z.n(), 2);
  EXPECT_EQ(capture([&] { load_phenotype(dir.file("c.tsv", "s1\t1\ns2\t1\n")); })
                .kind(),
            ErrorKind::constant_phenotype);
}

TEST(LoadMapping, RejectsDuplicatePairs) {
  TempDir dir;
  const auto map = load_mapping(dir.file("m.tsv", "f1\tg1\nf1\tg2\nf2\tg1\n"));
  EXPECT_EQ(map.pairs().size(), 3u);
  EXPECT_EQ(capture([&] { load_mapping(dir.file("d.tsv", "f1\tg1\nf1\tg1\n")); })
                .kind(),
            ErrorKind::duplicate_id);
}

TEST(Align, IdenticalIdsUnchanged) {
  Matrix v(3, 1);
  v << 1, 2, 3;
  const FeatureMatrix x({"a", "b", "c"}, {"f"}, v);
  const Phenotype y({"a", "b", "c"}, Vector::LinSpaced(3, 0, 1));
  const auto r = align(x, y);
  EXPECT_EQ(r.x.values(), x.values());
  EXPECT_EQ(r.y.values(), y.values());
  EXPECT_TRUE(r.dropped_from_features.empty());
  EXPECT_TRUE(r.dropped_from_phenotype.empty());
}

TEST(Align, ExtraPhenotypeSampleDropped) {
  Matrix v(3, 1);
  v << 1, 2, 3;
  const FeatureMatrix x({"a", "b", "c"}, {"f"}, v);
  Vector yv(4);
  yv << 9, 3, 2, 1;
  const Phenotype y({"z", "c", "b", "a"}, yv);
  const auto r = align(x, y);
  EXPECT_EQ(r.x.n(), 3);
  EXPECT_EQ(r.y.sample_ids(), x.sample_ids());
  EXPECT_DOUBLE_EQ(r.y.values()[0], 1.0);
  EXPECT_DOUBLE_EQ(r.y.values()[2], 3.0);
  EXPECT_EQ(r.dropped_from_phenotype, std::vector<std::string>{"z"});
}

TEST(Align, Idempotent) {
  Matrix v(4, 2);
  v << 1, 2, 3, 4, 5, 6, 7, 8;
  const FeatureMatrix x({"a", "b", "c", "d"}, {"f", "g"}, v);
  Vector yv(3);
  yv << 1, 5, 2;
  const Phenotype y({"d", "q", "b"}, yv);
  const auto once = align(x, y);
  const auto twice = align(once.x, once.y);
  EXPECT_EQ(twice.x.sample_ids(), once.x.sample_ids());
  EXPECT_EQ(twice.x.values(), once.x.values());
  EXPECT_EQ(twice.y.values(), once.y.values());
}

TEST(Align, DisjointIsError) {
  Matrix v(2, 1);
  v << 1, 2;
  const FeatureMatrix x({"a", "b"}, {"f"}, v);
  const Phenotype y({"c", "d"}, Vector::LinSpaced(2, 0, 1));
  EXPECT_EQ(capture([&] { align(x, y); }).kind(), ErrorKind::empty_intersection);
}

TEST(WriteReport, EmptySelection) {
  TempDir dir;
  SelectionSet s;
  const auto r = make_report("scones", s, {"f1", "f2"});
  write_report(r, dir.path("r.json"));
  const auto j = nlohmann::json::parse(slurp(dir.path("r.json")));
  EXPECT_TRUE(j["selected_ids"].is_array());
  EXPECT_TRUE(j["selected_ids"].empty());
  for (const char* key :
       {"method", "params", "selected_ids", "objective", "converged", "runtime_ms"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(slurp(dir.path("r.json.ids.txt")), "");
}

TEST(WriteReport, AscendingIndexOrderAndDeterministic) {
  TempDir dir;
  SelectionSet s;
  s.selected = {2, 0};
  s.objective_value = 1.25;
  auto r = make_report("scones", s, {"zeta", "beta", "alpha"});
  r.runtime_ms = 12.5;
  write_report(r, dir.path("a.json"));
  write_report(r, dir.path("b.json"));
  const auto j = nlohmann::json::parse(slurp(dir.path("a.json")));
  EXPECT_EQ(j["selected_ids"], (nlohmann::json{"zeta", "alpha"}));
  EXPECT_EQ(slurp(dir.path("a.json.ids.txt")), "zeta\nalpha\n");
  EXPECT_EQ(slurp(dir.path("a.json")), slurp(dir.path("b.json")));
}

TEST(WriteReport, UnwritablePath) {
  const auto r = make_report("scones", SelectionSet{}, {"f"});
  EXPECT_EQ(capture([&] { write_report(r, "/nonexistent/dir/r.json"); }).kind(),
            ErrorKind::io);
}

TEST(WeightedNetwork, CanonicalizesAndValidates) {
  const auto g = WeightedNetwork::anonymous(3, {{2, 0, 1.0}, {1, 0, 2.0}});
  EXPECT_EQ(g.edges()[0], (Edge{0, 1, 2.0}));
  EXPECT_EQ(g.edges()[1], (Edge{0, 2, 1.0}));
  EXPECT_DOUBLE_EQ(g.degree(0), 3.0);
  EXPECT_THROW(WeightedNetwork::anonymous(2, {{0, 1, 1}, {1, 0, 1}}), Error);
  EXPECT_THROW(WeightedNetwork::anonymous(2, {{0, 2, 1}}), Error);
  EXPECT_THROW(WeightedNetwork({"a", "a"}, {}), Error);
}
