#include <doctest.h>

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "generators.hpp"
#include "signpipe/cli/app.hpp"
#include "signpipe/kb/kb_io.hpp"
#include "signpipe/perturb/clip_io.hpp"

using namespace signpipe;
using signpipe::testing::TempDir;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

void write_small_clip(const TempDir& dir) {
  std::vector<perturb::FrameGrid> frames;
  std::vector<perturb::Landmarks> track;
  Rng rng(5);
  for (int t = 0; t < 4; ++t) {
    std::vector<float> v(8 * 8 * 3);
    for (auto& x : v) x = static_cast<float>(rng.uniform());
    frames.emplace_back(perturb::FrameShape{8, 8, 3}, std::move(v));
    track.push_back({{1.0 + 2.0 * t, 2.0, 1.0}, {6.0, 6.0, 1.0}});
  }
  perturb::write_clip(dir / "clip.spc", frames);
  perturb::write_landmarks(dir / "lm.jsonl", track);
}

}  // namespace

TEST_CASE("eval on identical files reports zero error") {
  TempDir dir("cli");
  spit(dir / "h.txt", "你好 世界\nhello\n");
  const auto r = run({"eval", "--hyp", (dir / "h.txt").string(), "--ref", (dir / "h.txt").string(), "--json"});
  REQUIRE(r.code == cli::kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.at("cer").get<double>() == 0.0);
  CHECK(doc.at("bleu").at("4").get<double>() == doctest::Approx(100.0));
}

TEST_CASE("usage problems exit 2, data problems exit 1") {
  TempDir dir("cli");
  CHECK(run({}).code == cli::kExitUsageError);
  CHECK(run({"nonsense"}).code == cli::kExitUsageError);
  CHECK(run({"eval", "--no-such-flag"}).code == cli::kExitUsageError);
  CHECK(run({"--help"}).code == cli::kExitOk);

  spit(dir / "a.txt", "x\ny\n");
  spit(dir / "b.txt", "x\n");
  const auto mismatch = run({"eval", "--hyp", (dir / "a.txt").string(), "--ref", (dir / "b.txt").string()});
  CHECK(mismatch.code == cli::kExitDataError);
  CHECK(mismatch.err.find("LineCountMismatch") != std::string::npos);
  CHECK(run({"eval", "--hyp", (dir / "missing.txt").string(), "--ref", (dir / "b.txt").string()}).code ==
        cli::kExitDataError);
}

TEST_CASE("split is reproducible from the same seed") {
  TempDir dir("cli");
  std::string ids;
  for (int i = 0; i < 37; ++i) ids += "id" + std::to_string(i) + "\n";
  spit(dir / "ids.txt", ids);
  const auto in = (dir / "ids.txt").string();
  REQUIRE(run({"split", "--n-from", in, "--seed", "9", "--out", (dir / "s1.json").string(), "--quiet"}).code == 0);
  REQUIRE(run({"split", "--n-from", in, "--seed", "9", "--out", (dir / "s2.json").string(), "--quiet"}).code == 0);
  CHECK(slurp(dir / "s1.json") == slurp(dir / "s2.json"));
  const auto doc = nlohmann::json::parse(slurp(dir / "s1.json"));
  CHECK(doc.at("train").size() + doc.at("dev").size() + doc.at("test").size() == 37);
  CHECK(fs::exists(dir / "s1.json.manifest.json"));

  // --kb and --n-from together are a usage error
  CHECK(run({"split", "--n-from", in, "--kb", in, "--out", (dir / "s3.json").string()}).code ==
        cli::kExitUsageError);
}

TEST_CASE("split without --out writes split.json in the working directory") {
  TempDir dir("cli");
  spit(dir / "ids.txt", "a\nb\nc\nd\ne\n");
  const auto cwd = fs::current_path();
  fs::current_path(dir.path());
  const int first = run({"split", "--n-from", "ids.txt", "--seed", "7", "--quiet"}).code;
  const auto once = slurp(dir / "split.json");
  const int second = run({"split", "--n-from", "ids.txt", "--seed", "7", "--quiet"}).code;
  fs::current_path(cwd);
  CHECK(first == 0);
  CHECK(second == 0);
  CHECK_FALSE(once.empty());
  CHECK(once == slurp(dir / "split.json"));
}

TEST_CASE("flags override the config file, which overrides defaults") {
  TempDir dir("cli");
  write_small_clip(dir);
  const std::vector<std::string> base{"perturb",         "--clip", (dir / "clip.spc").string(), "--landmarks",
                                      (dir / "lm.jsonl").string(), "--out",  (dir / "p.spc").string(), "--json"};
  auto theta_of = [](const Run& r) {
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out).at("perturb_config").at("theta").get<double>();
  };

  CHECK(theta_of(run(base)) == 2.0);

  spit(dir / "cfg.toml", "# shared\nseed = 4\n\n[perturb]\ntheta = 3.0\n");
  auto with_cfg = base;
  with_cfg.insert(with_cfg.end(), {"--config", (dir / "cfg.toml").string()});
  CHECK(theta_of(run(with_cfg)) == 3.0);

  auto with_flag = with_cfg;
  with_flag.insert(with_flag.end(), {"--theta", "4.0"});
  CHECK(theta_of(run(with_flag)) == 4.0);
}

TEST_CASE("config mistakes are reported as usage errors") {
  TempDir dir("cli");
  write_small_clip(dir);
  const std::vector<std::string> base{"perturb",         "--clip", (dir / "clip.spc").string(), "--landmarks",
                                      (dir / "lm.jsonl").string(), "--out",  (dir / "p.spc").string()};
  auto with = [&](const std::string& text) {
    spit(dir / "cfg.toml", text);
    auto args = base;
    args.insert(args.end(), {"--config", (dir / "cfg.toml").string()});
    return run(args);
  };

  const auto typo = with("[perturb]\nthetaa = 3.0\n");
  CHECK(typo.code == cli::kExitUsageError);
  CHECK(typo.err.find("UnknownKey") != std::string::npos);
  CHECK(typo.err.find("thetaa") != std::string::npos);

  const auto wrong_type = with("[perturb]\ntheta = \"fast\"\n");
  CHECK(wrong_type.code == cli::kExitUsageError);
  CHECK(wrong_type.err.find("TypeError") != std::string::npos);

  CHECK(with("[nowhere]\nx = 1\n").code == cli::kExitUsageError);
  CHECK(with("theta 3\n").code == cli::kExitUsageError);

  auto bad_flag = base;
  bad_flag.insert(bad_flag.end(), {"--theta", "abc"});
  CHECK(run(bad_flag).code == cli::kExitUsageError);

  auto bad_weights = base;
  bad_weights.insert(bad_weights.end(), {"--w-large", "0.5", "--w-small", "0.7"});
  CHECK(run(bad_weights).code == cli::kExitUsageError);
}

TEST_CASE("rerun replays a manifest and refuses changed inputs") {
  TempDir dir("cli");
  write_small_clip(dir);
  const auto r = run({"perturb", "--clip", (dir / "clip.spc").string(), "--landmarks", (dir / "lm.jsonl").string(),
                      "--out", (dir / "p.spc").string(), "--masks-out", (dir / "m.spc").string(), "--seed", "11",
                      "--threads", "3", "--quiet"});
  REQUIRE(r.code == 0);
  const auto manifest = dir / "p.spc.manifest.json";
  REQUIRE(fs::exists(manifest));
  const auto doc = nlohmann::json::parse(slurp(manifest));
  CHECK(doc.at("seed") == 11);
  CHECK(doc.at("inputs").size() == 2);

  const auto again = run({"rerun", manifest.string(), "--output-dir", (dir / "again").string(), "--quiet"});
  REQUIRE(again.code == 0);
  CHECK(slurp(dir / "p.spc") == slurp(dir / "again" / "p.spc"));
  CHECK(slurp(dir / "m.spc") == slurp(dir / "again" / "m.spc"));

  spit(dir / "lm.jsonl", slurp(dir / "lm.jsonl") + "\n");
  const auto stale = run({"rerun", manifest.string(), "--output-dir", (dir / "stale").string()});
  CHECK(stale.code == cli::kExitDataError);
  CHECK(stale.err.find("StaleInput") != std::string::npos);
}

TEST_CASE("kb build, validate and resolve chain through files") {
  TempDir dir("cli");
  std::string source;
  for (const char* sym : {"你好", "世界", "再见"}) {
    source += nlohmann::json{{"symbol", sym}, {"pose", kb::pose_to_json(testing::tiny_pose())}}.dump() + "\n";
  }
  spit(dir / "src.jsonl", source);
  const auto kbfile = (dir / "kb.json").string();
  REQUIRE(run({"kb", "build", "--source", (dir / "src.jsonl").string(), "--out", kbfile, "--embedding-dim", "8",
               "--quiet"})
              .code == 0);
  CHECK(run({"kb", "validate", "--kb", kbfile, "--quiet"}).code == 0);

  spit(dir / "s.txt", "你好世界\n再见\n");
  const auto res = run({"resolve", "--kb", kbfile, "--input", (dir / "s.txt").string(), "--out",
                        (dir / "r.jsonl").string(), "--json"});
  REQUIRE(res.code == 0);
  CHECK(nlohmann::json::parse(res.out).at("sentences") == 2);
}

TEST_CASE("loss combines terms given as pairs") {
  TempDir dir("cli");
  spit(dir / "p.jsonl", "{\"t\":0,\"p\":[0.5,0.5]}\n");
  spit(dir / "q.jsonl", "{\"t\":0,\"p\":[0.25,0.75]}\n");
  const auto r = run({"loss", "--pairs", "self_kl:" + (dir / "p.jsonl").string() + "," + (dir / "q.jsonl").string(),
                      "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc.dump().find("total") != std::string::npos);
  CHECK(run({"loss", "--pairs", "bogus:a,b"}).code == cli::kExitUsageError);
}
