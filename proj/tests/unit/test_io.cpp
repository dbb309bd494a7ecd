#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "certun/dataset.hpp"
#include "certun/error.hpp"
#include "certun/model.hpp"
#include "certun/synthetic.hpp"
#include "fixtures.hpp"

using namespace certun;

namespace {

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("hand-written three-node dataset") {
    const auto dir = fixtures::temp_dir("io_three");
    write(dir / "nodes.tsv",
          "# num_classes=3\n"
          "id\tlabel\tsplit\tf0\tf1\n"
          "0\t2\ttrain\t0.5\t-1.25\n"
          "1\t0\ttest\t3\t0\n"
          "2\t-1\tnone\t1e-3\t7.5\n");
    write(dir / "edges.tsv", "src\tdst\n0\t1\n1\t2\n2\t1\n");
    const auto loaded = load_dataset(dir);
    const auto& g = loaded.graph;
    CHECK(g.num_nodes() == 3);
    CHECK(g.feature_dim() == 2);
    CHECK(g.num_classes() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(loaded.edge_rows == 3);
    CHECK(g.label(0) == 2);
    CHECK(g.label(2) == -1);
    CHECK(g.is_train(0));
    CHECK(g.is_test(1));
    CHECK_FALSE(g.is_train(2));
    CHECK(g.features()(0, 1) == -1.25);
    CHECK(g.features()(2, 0) == 1e-3);

    const auto out = fixtures::temp_dir("io_three_out");
    save_dataset(g, out);
    const auto again = load_dataset(out).graph;
    CHECK(again.to_data().features == g.to_data().features);
    CHECK(again.edges() == g.edges());
    CHECK(again.to_data().labels == g.to_data().labels);
    CHECK(again.to_data().train_mask == g.to_data().train_mask);
    CHECK(again.to_data().test_mask == g.to_data().test_mask);
    CHECK(again.num_classes() == 3);
  }

  TEST_CASE("random graph round trip is exact") {
    const auto g = fixtures::random_graph(61, 50, 5, 4, 0.1);
    const auto dir = fixtures::temp_dir("io_random");
    save_dataset(g, dir);
    const auto back = load_dataset(dir).graph;
    CHECK(back.to_data().features == g.to_data().features);
    CHECK(back.edges() == g.edges());
  }

  TEST_CASE("malformed inputs") {
    const auto dir = fixtures::temp_dir("io_bad");
    write(dir / "edges.tsv", "src\tdst\n");

    write(dir / "nodes.tsv", "0\t0\ttrain\t1.0\n");
    CHECK_THROWS_AS(load_dataset(dir), Error);

    write(dir / "nodes.tsv", "id\tlabel\tsplit\tf0\n0\t0\ttrain\t1.0\n1\t0\tbogus\t2.0\n");
    try {
      load_dataset(dir);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      CHECK(std::string(e.what()).find("nodes.tsv:3") != std::string::npos);
    }

    write(dir / "nodes.tsv", "id\tlabel\tsplit\tf0\n0\t0\ttrain\tx\n");
    CHECK_THROWS_AS(load_dataset(dir), Error);

    write(dir / "nodes.tsv", "id\tlabel\tsplit\tf0\n0\t0\ttrain\t1\n1\t1\ttest\t2\n");
    write(dir / "edges.tsv", "src\tdst\n0\t5\n");
    try {
      load_dataset(dir);
      FAIL("expected a dangling edge error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidEdge);
    }

    std::filesystem::remove(dir / "edges.tsv");
    CHECK_THROWS_AS(load_dataset(dir), Error);
  }

  TEST_CASE("citation converter") {
    const auto dir = fixtures::temp_dir("io_convert");
    std::string content;
    const char* classes[] = {"Theory", "Neural_Networks", "Case_Based"};
    for (int i = 0; i < 30; ++i) {
      content += "p" + std::to_string(100 + i);
      for (int j = 0; j < 4; ++j) content += (i + j) % 3 == 0 ? "\t1" : "\t0";
      content += std::string("\t") + classes[i % 3] + "\n";
    }
    write(dir / "x.content", content);
    std::string cites;
    for (int i = 0; i + 1 < 30; ++i) cites += "p" + std::to_string(100 + i) + "\tp" + std::to_string(101 + i) + "\n";
    cites += "p101\tp100\n";    // reverse duplicate
    cites += "p105\tp105\n";    // self-citation
    cites += "p105\tghost\n";   // unknown id
    write(dir / "x.cites", cites);

    ConvertOptions opts;
    opts.seed = 3;
    const auto out = dir / "out";
    const auto manifest = convert_citation_dataset(dir / "x.content", dir / "x.cites", out, opts);
    CHECK(manifest.num_nodes == 30);
    CHECK(manifest.feature_dim == 4);
    CHECK(manifest.num_classes == 3);
    CHECK(manifest.raw_edge_rows == 32);
    CHECK(manifest.undirected_edges == 29);
    CHECK(manifest.dropped_edges == 2);
    CHECK(manifest.class_names == std::vector<std::string>{"Case_Based", "Neural_Networks", "Theory"});
    CHECK(manifest.warnings.size() >= 2);

    const auto g = load_dataset(out).graph;
    CHECK(g.num_nodes() == 30);
    CHECK(g.num_edges() == 29);
    CHECK(g.num_train() == 27);
    CHECK(g.test_nodes().size() == 3);
    // Stratified: one test node per class.
    std::vector<int> per_class(3, 0);
    for (NodeId v : g.test_nodes()) ++per_class[static_cast<std::size_t>(g.label(v))];
    CHECK(per_class == std::vector<int>{1, 1, 1});

    const auto json = nlohmann::json::parse(read(out / "manifest.json"));
    CHECK(json["num_nodes"] == 30);
    CHECK(json["split"]["stratified"] == true);

    const auto out2 = dir / "out2";
    convert_citation_dataset(dir / "x.content", dir / "x.cites", out2, opts);
    CHECK(read(out / "nodes.tsv") == read(out2 / "nodes.tsv"));
  }

  TEST_CASE("synthetic generator") {
    SyntheticSpec spec;
    const auto a = gen_synthetic(spec, 4);
    const auto b = gen_synthetic(spec, 4);
    CHECK(a.edges() == b.edges());
    CHECK(a.to_data().features == b.to_data().features);
    CHECK(a.to_data().labels == b.to_data().labels);
    CHECK(a.num_nodes() == 300);

    spec.p_inter = 0.0;
    const auto c = gen_synthetic(spec, 5);
    for (const Edge& e : c.edges()) CHECK(c.label(e.u) == c.label(e.v));

    spec.separation = 8.0;
    spec.noise = 0.5;
    const auto sep = gen_synthetic(spec, 6);
    const Objective obj(sep, ModelSpec{});
    const auto theta = train(obj, {}, {}, 0).theta;
    const auto pred = obj.predict(theta);
    std::size_t correct = 0;
    for (NodeId v : sep.train_nodes()) correct += pred[v] == sep.label(v);
    CHECK(static_cast<double>(correct) / sep.num_train() > 0.95);

    SyntheticSpec bad;
    bad.num_nodes = 0;
    bad.num_classes = 0;
    CHECK_THROWS_AS(gen_synthetic(bad, 1), Error);
  }
}
