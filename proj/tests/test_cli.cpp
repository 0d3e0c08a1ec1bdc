/* Copyright 2026 The DAF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "daf/cli/commands.hpp"
#include "daf/cli/run_manifest.hpp"
#include "daf/common/binary_io.hpp"
#include "daf/common/csv.hpp"
#include "daf/data/attention_mass.hpp"
#include "daf/data/manifest.hpp"
#include "daf/features/audio.hpp"
#include "daf/stats/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace daf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "daf");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  // Keep command chatter out of the test log.
  std::ostringstream sink;
  auto* out = std::cout.rdbuf(sink.rdbuf());
  auto* err = std::cerr.rdbuf(sink.rdbuf());
  const int code = cli::run(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(out);
  std::cerr.rdbuf(err);
  return code;
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("daf_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::vector<std::string> kTinyModel = {"--conv-channels", "2", "--gru-hidden", "4", "--fc-hidden", "8",
                                             "--max-epochs", "2", "--patience", "1", "--lr", "1e-3"};

// Synthetic corpus shared by the train/attention tests: 5 dyads x 3 clips.
const fs::path& corpus() {
  static const fs::path dir = [] {
    const auto d = fresh_dir("corpus");
    REQUIRE(run_cli({"--seed", "3", "--out", (d / "c").string(), "synth", "--dyads", "5", "--clips", "3"}) == 0);
    REQUIRE(run_cli({"--out", (d / "s").string(), "split", "--manifest", (d / "c" / "manifest.csv").string()}) == 0);
    return d;
  }();
  return dir;
}

std::vector<std::string> train_args(const fs::path& out, const std::string& att, const std::string& drop,
                                    const std::string& folds = "") {
  std::vector<std::string> a{"--seed", "1", "--out", out.string(), "train-eval",
                             "--manifest", (corpus() / "c" / "manifest.csv").string(),
                             "--split", (corpus() / "s" / "split.json").string(),
                             "--task", "CA", "--attention", att, "--dropout", drop};
  if (!folds.empty()) a.insert(a.end(), {"--folds", folds});
  a.insert(a.end(), kTinyModel.begin(), kTinyModel.end());
  return a;
}

}  // namespace

TEST_CASE("git blob hashes match git") {
  const std::string hello = "hello\n";
  CHECK(cli::git_blob_hash({reinterpret_cast<const std::uint8_t*>(hello.data()), hello.size()}) ==
        "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(cli::git_blob_hash({}) == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("argument errors exit with 2") {
  CHECK(run_cli({"nonsense"}) == 2);
  CHECK(run_cli({"ztest"}) == 2);
  CHECK(run_cli({"train-eval", "--manifest", "x"}) == 2);
}

TEST_CASE("extract: empty directory, strict and lenient handling of a corrupt file") {
  const auto d = fresh_dir("extract");
  fs::create_directories(d / "in");
  CHECK(run_cli({"--out", (d / "o0").string(), "extract", "--in", (d / "in").string()}) == 2);

  features::AudioClip clip;
  clip.sample_rate = 16000;
  for (int n = 0; n < 8000; ++n) clip.samples.push_back(0.3 * std::sin(0.05 * n));
  features::write_wav(d / "in" / "good.wav", clip);
  write_text_file(d / "in" / "bad.wav", "RIFF....WAVEjunk");
  CHECK(run_cli({"--strict", "--out", (d / "o1").string(), "extract", "--in", (d / "in").string()}) == 2);
  CHECK(run_cli({"--out", (d / "o2").string(), "extract", "--in", (d / "in").string()}) == 0);
  CHECK(fs::exists(d / "o2" / "good.daf"));
  CHECK_FALSE(fs::exists(d / "o2" / "bad.daf"));
  CHECK(fs::exists(d / "o2" / "norm.json"));
  const auto run = json::parse(read_text_file(d / "o2" / "run.json"));
  CHECK(run["command"] == "extract");
  CHECK(run["inputs"].size() == 1);
  CHECK(run["inputs"][0]["git_blob_sha1"] == cli::git_blob_hash_file(d / "in" / "good.wav"));
  fs::remove_all(d);
}

TEST_CASE("synth and split write the documented artifacts") {
  const auto& d = corpus();
  const auto m = data::read_manifest(d / "c" / "manifest.csv");
  CHECK(m.instances.size() == 15);
  CHECK(fs::exists(d / "c" / "annotations.csv"));
  CHECK(fs::exists(d / "c" / "masks" / "d00_c000.mask"));
  CHECK(fs::exists(d / "c" / "wav" / "d04_c002.wav"));
  const auto split = json::parse(read_text_file(d / "s" / "split.json"));
  CHECK(split["groups"].size() == 5);
}

TEST_CASE("train-eval: six configurations give six reports and thirty checkpoints") {
  const auto out = fresh_dir("six");
  for (const char* att : {"no", "rnn", "cnn"}) {
    for (const char* drop : {"all", "cr"}) REQUIRE(run_cli(train_args(out, att, drop)) == 0);
  }
  std::size_t reports = 0, ckpts = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    const auto name = e.path().filename().string();
    reports += name.ends_with("_report.json");
    ckpts += name.ends_with(".dafm");
  }
  CHECK(reports == 6);
  CHECK(ckpts == 30);
  const auto r = stats::report_from_json(read_text_file(out / "CA_rnn_cr_report.json"));
  REQUIRE(r.fold_rho.size() == 5);
  long double m = 0;
  for (double v : r.fold_rho) m += v;
  m /= 5;
  long double ss = 0;
  for (double v : r.fold_rho) ss += (v - m) * (v - m);
  CHECK(std::fabs(r.mean_rho - static_cast<double>(m)) < 1e-12);
  CHECK(std::fabs(r.sd_rho - static_cast<double>(std::sqrt(ss / 4))) < 1e-12);
  CHECK(r.model == "ATT(R)+DROP(CR)");
  CHECK(r.pooled_n == 15);
  fs::remove_all(out);
}

TEST_CASE("train-eval: identical seeds give identical reports") {
  const auto a = fresh_dir("seed_a"), b = fresh_dir("seed_b");
  REQUIRE(run_cli(train_args(a, "rnn", "all", "0,2")) == 0);
  REQUIRE(run_cli(train_args(b, "rnn", "all", "0,2")) == 0);
  CHECK(read_text_file(a / "CA_rnn_all_report.json") == read_text_file(b / "CA_rnn_all_report.json"));
  CHECK(read_file_bytes(a / "CA_rnn_all_fold0.dafm") == read_file_bytes(b / "CA_rnn_all_fold0.dafm"));
  CHECK(read_text_file(a / "CA_rnn_all_predictions.csv") == read_text_file(b / "CA_rnn_all_predictions.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("attn-dump: rows, normalization, mass round-trip, mean-pool refusal") {
  const auto out = fresh_dir("attn");
  REQUIRE(run_cli(train_args(out / "te", "rnn", "cr", "0")) == 0);
  REQUIRE(run_cli(train_args(out / "te", "no", "cr", "0")) == 0);
  const auto manifest = (corpus() / "c" / "manifest.csv").string();
  REQUIRE(run_cli({"--out", (out / "dump").string(), "attn-dump", "--checkpoint",
                   (out / "te" / "CA_rnn_cr_fold0.dafm").string(), "--manifest", manifest, "--masks",
                   (corpus() / "c" / "masks").string()}) == 0);
  const auto csv = read_csv(out / "dump" / "attention.csv");
  const auto ci = csv.column("instance_id"), ca = csv.column("alpha"), cm = csv.column("speaker_mask"),
             cf = csv.column("frame_index");
  std::map<std::string, std::vector<double>> alpha;
  std::map<std::string, std::vector<std::uint8_t>> mask;
  for (std::size_t r = 0; r < csv.size(); ++r) {
    CHECK(static_cast<std::size_t>(csv.number(r, cf)) == alpha[csv.text(r, ci)].size());
    alpha[csv.text(r, ci)].push_back(csv.number(r, ca));
    mask[csv.text(r, ci)].push_back(static_cast<std::uint8_t>(csv.number(r, cm)));
  }
  CHECK(alpha.size() == 15);
  const auto mass = read_csv(out / "dump" / "attention_mass.csv");
  for (std::size_t r = 0; r < mass.size(); ++r) {
    const auto& id = mass.text(r, mass.column("instance_id"));
    const auto mask_file = data::read_mask(corpus() / "c" / "masks" / (id + ".mask"));
    CHECK(alpha[id].size() == mask_file.size());
    CHECK(mask[id] == mask_file);
    double s = 0;
    for (double a : alpha[id]) s += a;
    CHECK(std::fabs(s - 1.0) < 1e-6);
    const auto recomputed = data::attention_mass(alpha[id], mask_file);
    CHECK(std::fabs(recomputed.mass - mass.number(r, mass.column("mass"))) < 1e-12);
  }
  CHECK(run_cli({"--out", (out / "dump2").string(), "attn-dump", "--checkpoint",
                 (out / "te" / "CA_no_cr_fold0.dafm").string(), "--manifest", manifest}) == 2);
  fs::remove_all(out);
}

TEST_CASE("stats: identical raters and row order") {
  const auto d = fresh_dir("stats");
  std::mt19937_64 rng(5);
  std::vector<std::string> rows;
  for (int i = 0; i < 30; ++i) {
    const int v[4] = {static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2, static_cast<int>(rng() % 5) - 2,
                      static_cast<int>(rng() % 5) - 2};
    for (int r = 0; r < 3; ++r) {
      rows.push_back("i" + std::to_string(i) + ",d" + std::to_string(i % 5) + ",r" + std::to_string(r) + "," +
                     std::to_string(v[0]) + "," + std::to_string(v[1]) + "," + std::to_string(v[2]) + "," +
                     std::to_string(v[3]) + "\n");
    }
  }
  const std::string header = "instance_id,dyad_id,rater_id,CA,PA,CV,PV\n";
  std::string a = header, b = header;
  for (const auto& r : rows) a += r;
  std::shuffle(rows.begin(), rows.end(), rng);
  for (const auto& r : rows) b += r;
  write_text_file(d / "a.csv", a);
  write_text_file(d / "b.csv", b);
  REQUIRE(run_cli({"--out", (d / "oa").string(), "stats", "--annotations", (d / "a.csv").string()}) == 0);
  REQUIRE(run_cli({"--out", (d / "ob").string(), "stats", "--annotations", (d / "b.csv").string()}) == 0);
  const auto ja = json::parse(read_text_file(d / "oa" / "stats.json"));
  CHECK(ja == json::parse(read_text_file(d / "ob" / "stats.json")));
  for (const char* attr : {"CA", "PA", "CV", "PV"}) {
    CHECK(ja["icc"][attr]["icc31"] == 1.0);
    CHECK(ja["icc"][attr]["icc3k"] == 1.0);
    CHECK(fs::exists(d / "oa" / (std::string("hist_") + attr + ".csv")));
  }
  write_text_file(d / "missing.csv", header + "i1,d1,r1,0,0,0,0\ni2,d1,r2,1,1,1,1\n");
  CHECK(run_cli({"--out", (d / "oc").string(), "stats", "--annotations", (d / "missing.csv").string()}) == 2);
  fs::remove_all(d);
}

TEST_CASE("ztest: equal correlations and invalid input") {
  const auto d = fresh_dir("ztest");
  REQUIRE(run_cli({"--out", d.string(), "ztest", "--rho1", "0.4", "--rho2", "0.4", "--n", "100"}) == 0);
  const auto j = json::parse(read_text_file(d / "ztest.json"));
  CHECK(j["z"] == 0.0);
  CHECK(j["p"] == 1.0);
  CHECK(run_cli({"ztest", "--rho1", "1.0", "--rho2", "0.4", "--n", "100"}) == 3);
  CHECK(run_cli({"ztest", "--rho1", "0.1", "--rho2", "0.4", "--n", "3"}) == 4);
  fs::remove_all(d);
}
