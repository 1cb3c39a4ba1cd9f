/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli_app.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace agreesim::cli {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

constexpr char kSchemeHeader[] =
    R"({"scheme":{"labels":[[2,"Very Controversial"],[1,"Controversial"],)"
    R"([0,"Possibly Non-Controversial"],[-1,"Clearly Non-Controversial"]],)"
    R"("positive_threshold":0.5}})";

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result Invoke(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"agreesim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status =
      Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("agreesim_cli_" + std::to_string(::testing::UnitTest::GetInstance()
                                                 ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // A synthesized dataset with three annotators per document.
  std::string SynthData(int docs = 80, const std::string& seed = "4") {
    const std::string path = Path("data.jsonl");
    const Result r = Invoke({"synth", "--docs", std::to_string(docs), "--seed",
                             seed, "--out", path});
    EXPECT_EQ(r.status, 0) << r.err;
    return path;
  }

  std::string Fixture(const std::string& name,
                      const std::vector<std::string>& records) {
    std::string text = std::string(kSchemeHeader) + "\n";
    for (const auto& r : records) text += r + "\n";
    WriteText(Path(name), text);
    return Path(name);
  }

  fs::path dir_;
};

TEST(CliReflection, EveryOptionIsDocumentedAndParses) {
  CLI::App app{"agreesim", "agreesim"};
  Invocation inv;
  BuildApp(app, inv);
  const auto documented = DocumentedFlags();
  std::set<std::pair<std::string, std::string>> listed;
  for (const auto& f : documented) listed.insert({f.subcommand, f.flag});

  for (const CLI::App* sub : app.get_subcommands({})) {
    const std::string help = sub->help();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
      const std::string flag = "--" + opt->get_lnames().front();
      EXPECT_TRUE(listed.count({sub->get_name(), flag}))
          << sub->get_name() << " " << flag << " missing from DocumentedFlags";
      EXPECT_THAT(help, HasSubstr(flag));
      EXPECT_FALSE(opt->get_description().empty()) << flag;
    }
  }

  for (const auto& f : documented) {
    CLI::App fresh{"agreesim", "agreesim"};
    Invocation fresh_inv;
    BuildApp(fresh, fresh_inv);
    std::vector<std::string> args = MinimalArgs(f.subcommand);
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == f.flag) {
        args[i + 1] = f.value;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back(f.flag);
      if (!f.value.empty()) args.push_back(f.value);
    }
    std::vector<const char*> argv = {"agreesim", f.subcommand.c_str()};
    for (const auto& a : args) argv.push_back(a.c_str());
    EXPECT_NO_THROW(fresh.parse(static_cast<int>(argv.size()), argv.data()))
        << f.subcommand << " " << f.flag << " " << f.value;
  }
}

TEST(CliUsage, HelpAndUsageErrors) {
  const Result help = Invoke({"--help"});
  EXPECT_EQ(help.status, 0);
  EXPECT_THAT(help.out, HasSubstr("simulate"));
  const Result missing = Invoke({"simulate", "x.jsonl", "--system", "sample"});
  EXPECT_EQ(missing.status, 2);
  EXPECT_EQ(Invoke({"simulate", "x.jsonl", "--bogus"}).status, 2);
  EXPECT_EQ(Invoke({"simulate", "--help"}).status, 0);
}

TEST_F(CliTest, SimulateIsReproducible) {
  const std::string data = SynthData();
  std::string reports[3];
  const char* jobs[3] = {"1", "1", "8"};
  for (int i = 0; i < 3; ++i) {
    const std::string out = Path("r" + std::to_string(i) + ".json");
    const Result r =
        Invoke({"simulate", data, "--system", "conflate(sample)", "--truth",
                "average", "--trials", "300", "--seed", "11", "--jobs", jobs[i],
                "--out", out, "--samples-out", out + ".samples"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_THAT(r.out, HasSubstr("conflate(sample) vs average [auc]"));
    reports[i] = ReadAll(out) + ReadAll(out + ".samples");
  }
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(reports[0], reports[2]);
  EXPECT_THAT(reports[0], HasSubstr("samples_digest"));
}

TEST_F(CliTest, ConflateWithoutPairsIsConfigError) {
  const std::string data = Fixture(
      "single.jsonl", {R"({"doc_id":"a","labels":[2]})",
                       R"({"doc_id":"b","labels":[-1]})"});
  const std::string out = Path("never.json");
  const Result r = Invoke({"simulate", data, "--system", "conflate(sample)",
                           "--truth", "average", "--trials", "10", "--seed", "1",
                           "--out", out});
  EXPECT_EQ(r.status, 1);
  EXPECT_THAT(r.err, HasSubstr("config"));
  EXPECT_THAT(r.err, HasSubstr("matrix"));
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, ZeroTrialsIsAnError) {
  const std::string data = SynthData(20);
  const Result r = Invoke({"simulate", data, "--system", "sample", "--truth",
                           "average", "--trials", "0", "--seed", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_THAT(r.err, HasSubstr("trials"));
}

TEST_F(CliTest, SuiteConfigAndPresets) {
  const std::string data = SynthData(40);
  WriteText(Path("empty.json"), "[]");
  const Result empty = Invoke({"suite", data, "--config", Path("empty.json"),
                               "--seed", "1"});
  EXPECT_EQ(empty.status, 0) << empty.err;
  EXPECT_THAT(empty.out, HasSubstr("| # | System Model | Truth Model |"));

  const Result unknown =
      Invoke({"suite", data, "--preset", "tableX", "--seed", "1"});
  EXPECT_EQ(unknown.status, 1);
  EXPECT_THAT(unknown.err, HasSubstr("table2"));

  const Result ran = Invoke({"suite", data, "--preset", "table2", "--seed", "2",
                             "--trials", "40", "--markdown-out", Path("t.md"),
                             "--samples-dir", dir_.string(), "--out",
                             Path("suite.json")});
  ASSERT_EQ(ran.status, 0) << ran.err;
  EXPECT_EQ(ReadAll(Path("t.md")), ran.out);
  for (int i = 1; i <= 6; ++i) {
    EXPECT_TRUE(fs::exists(Path("row" + std::to_string(i) + ".samples")));
  }
  EXPECT_THAT(ReadAll(Path("suite.json")), HasSubstr("flip(0.643,truth)"));
}

TEST_F(CliTest, SuiteWithFailingRowWritesNothing) {
  const std::string data = Fixture(
      "single.jsonl", {R"({"doc_id":"a","labels":[2]})",
                       R"({"doc_id":"b","labels":[-1]})",
                       R"({"doc_id":"c","labels":[0]})"});
  const Result r = Invoke({"suite", data, "--preset", "table2", "--seed", "1",
                           "--trials", "20", "--out", Path("s.json")});
  EXPECT_EQ(r.status, 1);
  EXPECT_THAT(r.err, HasSubstr("no output files written"));
  EXPECT_FALSE(fs::exists(Path("s.json")));
}

TEST_F(CliTest, AgreementAndConflation) {
  const std::string unanimous = Fixture(
      "u.jsonl", {R"({"doc_id":"a","labels":[2,2]})",
                  R"({"doc_id":"b","labels":[-1,-1,-1]})"});
  const Result agree = Invoke({"agreement", unanimous});
  EXPECT_EQ(agree.status, 0) << agree.err;
  EXPECT_EQ(agree.out, "1\n");

  const std::string single =
      Fixture("s.jsonl", {R"({"doc_id":"a","labels":[2]})"});
  const Result unlearnable = Invoke({"conflation", single});
  EXPECT_EQ(unlearnable.status, 1);
  EXPECT_THAT(unlearnable.err, HasSubstr("conflation unlearnable"));

  const std::string pairs = Fixture(
      "p.jsonl", {R"({"doc_id":"a","labels":[1,1]})",
                  R"({"doc_id":"b","labels":[1,0]})"});
  const Result table = Invoke({"conflation", pairs, "--out", Path("m.json")});
  ASSERT_EQ(table.status, 0) << table.err;
  EXPECT_THAT(table.out, HasSubstr("agreement: 0.5"));
  EXPECT_THAT(ReadAll(Path("m.json")), HasSubstr("counts"));
}

TEST_F(CliTest, TabularWithSidecarScheme) {
  WriteText(Path("scheme.json"), kSchemeHeader);
  WriteText(Path("data.tsv"), "a\t1\t1\nb\t1\t0\n");
  const Result r = Invoke({"agreement", Path("data.tsv"), "--scheme",
                           Path("scheme.json")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "0.5\n");
}

TEST_F(CliTest, Assess) {
  WriteText(Path("row1.samples"), "# comment\n1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n");
  const Result low = Invoke({"assess", "--score", "0.5", "--samples",
                             Path("row1.samples")});
  EXPECT_EQ(low.status, 0) << low.err;
  EXPECT_THAT(low.out, HasSubstr("verdict=below_band"));
  const Result mid = Invoke({"assess", "--score", "5", "--samples",
                             Path("row1.samples")});
  EXPECT_THAT(mid.out, HasSubstr("percentile_rank=45.0000"));
  EXPECT_THAT(mid.out, HasSubstr("verdict=within_band"));
  const Result missing =
      Invoke({"assess", "--score", "5", "--samples", Path("nope.samples")});
  EXPECT_EQ(missing.status, 1);
}

TEST_F(CliTest, Synth) {
  const Result a = Invoke({"synth", "--docs", "15", "--seed", "8"});
  const Result b = Invoke({"synth", "--docs", "15", "--seed", "8"});
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_THAT(a.out, HasSubstr("\"doc_id\":\"d15\""));
  const Result dir = Invoke({"synth", "--docs", "5", "--seed", "8", "--mode",
                             "dirichlet", "--alpha", "1,1,1,1",
                             "--annotator-dist", "2:1,4:1"});
  EXPECT_EQ(dir.status, 0) << dir.err;
  const Result bad = Invoke({"synth", "--seed", "1", "--mode", "dirichlet"});
  EXPECT_EQ(bad.status, 1);
  const Result bad_dist =
      Invoke({"synth", "--seed", "1", "--annotator-dist", "three"});
  EXPECT_EQ(bad_dist.status, 1);
}

}  // namespace
}  // namespace agreesim::cli
