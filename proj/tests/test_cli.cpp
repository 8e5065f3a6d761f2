#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "rbvf/checkpoint.hpp"
#include "rbvf/config.hpp"
#include "rbvf/csv.hpp"

using namespace rbvf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rbvf_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& content) {
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << content;
  return p;
}

}  // namespace

TEST_CASE("config defaults use the desk preset") {
  const RunConfig cfg = parse_config("", {});
  CHECK(cfg.env == "pendulum");
  CHECK(cfg.agent == "rbf-dqn");
  CHECK(cfg.preset == "desk");
  CHECK(cfg.episodes == 200);
  CHECK(cfg.agent_cfg.num_centroids == 20);
  CHECK(cfg.agent_cfg.batch_size == 64);
  CHECK(cfg.agent_cfg.beta == 1.0);
  CHECK(cfg.agent_cfg.gamma == 0.99);
  CHECK(cfg.agent_cfg.value_hidden == std::vector<int>{128, 128});
  CHECK(cfg.agent_cfg.centroid_hidden == std::vector<int>{128});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{0});
}

TEST_CASE("paper preset restores the documented large-scale settings") {
  const RunConfig cfg = parse_config("", {"preset=paper"});
  CHECK(cfg.agent_cfg.num_centroids == 100);
  CHECK(cfg.agent_cfg.batch_size == 256);
  CHECK(cfg.agent_cfg.value_hidden == std::vector<int>({512, 512, 512}));
  CHECK(cfg.agent_cfg.centroid_hidden == std::vector<int>{512});
  CHECK(cfg.agent_cfg.updates_per_episode == 1000);
  CHECK(cfg.agent_cfg.learning_rate == 5e-4);
  CHECK(cfg.agent_cfg.target_rate == 0.005);
  CHECK(cfg.agent_cfg.buffer_capacity == 500000);
  CHECK(cfg.agent_cfg.gamma == 0.99);
}

TEST_CASE("config file plus overrides layer in order") {
  TempDir tmp;
  const fs::path file = write_file(tmp.path, "run.cfg",
                                   "# comment line\n"
                                   "env = pointmass2d\n"
                                   "num_centroids = 10\n"
                                   "seeds = 1,2,3\n");
  const RunConfig cfg = parse_config(file, {"num_centroids=7", "beta=2.5"});
  CHECK(cfg.env == "pointmass2d");
  CHECK(cfg.agent_cfg.num_centroids == 7);  // override wins over file
  CHECK(cfg.agent_cfg.beta == 2.5);
  CHECK(cfg.seeds == std::vector<std::uint64_t>({1, 2, 3}));
}

TEST_CASE("config errors name the offending key") {
  CHECK_THROWS_WITH_AS(parse_config("", {"gamma=1.5"}), doctest::Contains("gamma"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("", {"gamma=abc"}), doctest::Contains("gamma"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("", {"frobnicate=1"}), doctest::Contains("frobnicate"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("", {"agent=dqn"}), doctest::Contains("agent"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("", {"preset=huge"}), doctest::Contains("preset"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("", {"batch_size=0"}), doctest::Contains("batch_size"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config("", {"no_equals_sign"}), ConfigError);
  CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/rbvf.cfg"), {}), ConfigError);
}

TEST_CASE("serialized config reparses to the same settings") {
  TempDir tmp;
  const RunConfig cfg =
      parse_config("", {"preset=paper", "env=pointmass2d", "beta=0.5", "seeds=4,5"});
  const fs::path file = write_file(tmp.path, "echo.cfg", serialize_config(cfg));
  const RunConfig back = parse_config(file, {});
  CHECK(back.env == cfg.env);
  CHECK(back.preset == cfg.preset);
  CHECK(back.seeds == cfg.seeds);
  CHECK(back.agent_cfg.beta == cfg.agent_cfg.beta);
  CHECK(back.agent_cfg.num_centroids == cfg.agent_cfg.num_centroids);
  CHECK(serialize_config(back) == serialize_config(cfg));
}

TEST_CASE("output directory preparation") {
  TempDir tmp;
  RunConfig cfg = parse_config("", {});
  cfg.out_dir = (tmp.path / "run1").string();

  SUBCASE("creates the directory and echoes the config") {
    prepare_output_dir(cfg);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "config.txt"));
    std::ifstream in(fs::path(cfg.out_dir) / "config.txt");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("num_centroids=20") != std::string::npos);
  }

  SUBCASE("refuses to clobber a nonempty directory unless overwrite is set") {
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir, "old.txt", "stale");
    CHECK_THROWS_AS(prepare_output_dir(cfg), ConfigError);
    cfg.overwrite = true;
    CHECK_NOTHROW(prepare_output_dir(cfg));
  }

  SUBCASE("empty out_dir is an error") {
    cfg.out_dir = "";
    CHECK_THROWS_AS(prepare_output_dir(cfg), ConfigError);
  }
}

TEST_CASE("trailing mean") {
  SUBCASE("constant series is its own smoothing") {
    const std::vector<double> v(25, 3.5);
    CHECK(trailing_mean(v) == v);
  }

  SUBCASE("ramp warms up then averages the window") {
    std::vector<double> v;
    for (int i = 0; i < 15; ++i) v.push_back(i);
    const auto m = trailing_mean(v);
    CHECK(m[0] == 0.0);
    CHECK(m[1] == doctest::Approx(0.5));
    CHECK(m[9] == doctest::Approx(4.5));    // mean of 0..9
    CHECK(m[14] == doctest::Approx(9.5));   // mean of 5..14
  }

  SUBCASE("window 1 is the identity") {
    const std::vector<double> v{3.0, -1.0, 7.0};
    CHECK(trailing_mean(v, 1) == v);
  }
}

TEST_CASE("area under the learning curve") {
  TrainingLog log;
  for (int i = 0; i < 3; ++i) {
    EpisodeRecord r;
    r.episode = i;
    log.push_back(r);
  }
  log[0].episode_return = 0.0;
  log[1].episode_return = 2.0;
  log[2].episode_return = 4.0;
  // trapezoid: (0+2)/2 + (2+4)/2 = 4
  CHECK(area_under_curve(log) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(area_under_curve(TrainingLog{}) == 0.0);
}

TEST_CASE("csv writers emit a header and one row per record") {
  TempDir tmp;
  TrainingLog log;
  EpisodeRecord r;
  r.episode = 0;
  r.steps = 200;
  r.episode_return = -123.5;
  log.push_back(r);

  write_training_log(tmp.path / "log.csv", log);
  write_learning_curve(tmp.path / "curve.csv", log);
  std::ifstream in(tmp.path / "log.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "episode,steps,return,mean_loss,epsilon,wall_ms");
  CHECK(row.find("-123.5") != std::string::npos);

  std::ifstream cin_(tmp.path / "curve.csv");
  std::getline(cin_, header);
  CHECK(header == "episode,return,loss,smoothed_return");

  CHECK_THROWS_AS(write_learning_curve(tmp.path / "x.csv", TrainingLog{}),
                  std::invalid_argument);
}

TEST_CASE("checkpoint round trip") {
  TempDir tmp;
  RbvfModelSpec spec;
  spec.state_dim = 3;
  spec.action_dim = 1;
  spec.num_centroids = 5;
  spec.beta = 1.25;
  spec.value_hidden = {8};
  spec.centroid_hidden = {6};
  spec.action_low = Vector::Constant(1, -2.0);
  spec.action_high = Vector::Constant(1, 2.0);
  RbvfNetwork net(spec);
  ParamStore store;
  std::mt19937_64 rng(33);
  net.init_params(store, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& name : store.names())
    for (Eigen::Index i = 0; i < store.values(name).size(); ++i)
      store.values(name)(i) = gauss(rng);

  const fs::path ckpt = tmp.path / "model.ckpt";
  save_checkpoint(ckpt, spec, store);

  SUBCASE("bitwise-identical parameters come back") {
    const Checkpoint loaded = load_checkpoint(ckpt);
    CHECK(specs_equal(loaded.spec, spec));
    REQUIRE(loaded.params.names() == store.names());
    for (const auto& name : store.names())
      CHECK(loaded.params.values(name) == store.values(name));
  }

  SUBCASE("load_checkpoint_for validates the spec") {
    CHECK_NOTHROW(load_checkpoint_for(ckpt, spec));
    RbvfModelSpec other = spec;
    other.num_centroids = 6;
    CHECK_THROWS_AS(load_checkpoint_for(ckpt, other), std::runtime_error);
    other = spec;
    other.beta = 2.0;
    CHECK_THROWS_AS(load_checkpoint_for(ckpt, other), std::runtime_error);
  }

  SUBCASE("corrupted header is rejected") {
    std::ofstream out(ckpt, std::ios::trunc);
    out << "NOT-A-CHECKPOINT\n";
    out.close();
    CHECK_THROWS_AS(load_checkpoint(ckpt), std::runtime_error);
    CHECK_THROWS_AS(load_checkpoint(tmp.path / "missing.ckpt"), std::runtime_error);
  }
}

TEST_CASE("sweep summary csv") {
  TempDir tmp;
  std::vector<SweepRow> rows{{5.0, 0, -210.0, -40000.0}, {20.0, 1, -150.0, -30000.0}};
  write_sweep_summary(tmp.path / "sweep.csv", rows);
  std::ifstream in(tmp.path / "sweep.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "axis_value,seed,final_mean_return,area_under_curve");
  int count = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++count;
  CHECK(count == 2);
}
