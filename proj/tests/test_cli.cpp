/*
 * Copyright 2026 The OSPK Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Sandbox {
public:
    Sandbox() : dir_(fs::temp_directory_path() / ("ospk-cli-test-" + std::to_string(::getpid())))
    {
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    Result run(const std::string &args) const
    {
        const std::string cmd = std::string(OSPK_CLI_PATH) + " " + args + " >" + path("stdout") + " 2>" +
                                path("stderr");
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(path("stdout"));
        r.err = slurp(path("stderr"));
        return r;
    }

private:
    fs::path dir_;
};

} // namespace

TEST_CASE("generate-weights is deterministic and sized by synapse count")
{
    Sandbox box;
    REQUIRE(box.run("generate-weights --seed 42 -o " + box.path("a.bin")).code == 0);
    REQUIRE(box.run("generate-weights --seed 42 -o " + box.path("b.bin")).code == 0);
    REQUIRE(box.run("generate-weights --seed 43 -o " + box.path("c.bin")).code == 0);
    CHECK(slurp(box.path("a.bin")) == slurp(box.path("b.bin")));
    CHECK(slurp(box.path("a.bin")) != slurp(box.path("c.bin")));
    // 8-byte preamble, 3 x 8-byte layer table, 132,480-byte payload
    CHECK(fs::file_size(box.path("a.bin")) == 8 + 24 + 132480);

    const Result bad = box.run("generate-weights --dims 1-0 -o " + box.path("d.bin"));
    CHECK(bad.code == 4);
    CHECK_FALSE(fs::exists(box.path("d.bin")));
    CHECK(box.run("generate-weights --dims 10-x -o " + box.path("d.bin")).code == 4);
}

TEST_CASE("image generation and conversion")
{
    Sandbox box;
    REQUIRE(box.run("generate-image --seed 5 -o " + box.path("a.pgm")).code == 0);
    REQUIRE(box.run("convert-image -i " + box.path("a.pgm") + " -o " + box.path("a.raw")).code == 0);
    CHECK(fs::file_size(box.path("a.raw")) == 1024);
    REQUIRE(box.run("convert-image -i " + box.path("a.raw") + " -o " + box.path("b.pgm")).code == 0);
    CHECK(slurp(box.path("a.pgm")) == slurp(box.path("b.pgm")));
    std::ofstream(box.path("bad.raw")) << "short";
    CHECK(box.run("convert-image -i " + box.path("bad.raw") + " -o " + box.path("c.pgm")).code == 3);
}

TEST_CASE("run in both modes reports agreement")
{
    Sandbox box;
    REQUIRE(box.run("generate-weights --seed 7 -o " + box.path("w.bin")).code == 0);
    REQUIRE(box.run("generate-image --seed 1 -o " + box.path("a.pgm")).code == 0);
    REQUIRE(box.run("generate-image --seed 2 -o " + box.path("b.raw")).code == 0);
    const std::string common = "run --model both -w " + box.path("w.bin") + " -i " + box.path("a.pgm") + " -i " +
                               box.path("b.raw") + " -T 4";
    const Result human = box.run(common);
    CHECK(human.code == 0);
    CHECK(human.out.find("models agree") != std::string::npos);

    const Result j1 = box.run(common + " --format json -j 1");
    const Result j4 = box.run(common + " --format json -j 4");
    REQUIRE(j1.code == 0);
    CHECK(j1.out == j4.out);
    const auto doc = nlohmann::json::parse(j1.out);
    CHECK(doc["models_agree"] == true);
    CHECK(doc["verdict"] == "models agree");
    CHECK(doc["images"].size() == 2);
    CHECK(doc["images"][0]["golden"]["spike_counts"] == doc["images"][0]["cycle"]["spike_counts"]);

    const Result csv = box.run(common + " --format csv");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("image,model,prediction", 0) == 0);
}

TEST_CASE("cycle run reports canonical latency")
{
    Sandbox box;
    REQUIRE(box.run("generate-weights --seed 1 -o " + box.path("w.bin")).code == 0);
    REQUIRE(box.run("generate-image --seed 1 -o " + box.path("a.raw")).code == 0);
    const Result r = box.run("run --model cycle --clock-hz 25000000 --format json -w " + box.path("w.bin") +
                             " -i " + box.path("a.raw") + " --trace-csv " + box.path("t.csv"));
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto &timing = doc["images"][0]["cycle"]["timing"];
    // 515 cycles plus the final output save
    CHECK(timing["total_cycles"] == 516);
    CHECK(timing["total_latency_s"].get<double>() == doctest::Approx(20.64e-6));
    CHECK(slurp(box.path("t.csv")).rfind("cycle,", 0) == 0);
}

TEST_CASE("error exit codes")
{
    Sandbox box;
    REQUIRE(box.run("generate-image --seed 1 -o " + box.path("a.raw")).code == 0);
    const Result missing = box.run("run -w " + box.path("nope.bin") + " -i " + box.path("a.raw"));
    CHECK(missing.code == 2);
    CHECK(missing.err.find(box.path("nope.bin")) != std::string::npos);

    std::ofstream(box.path("junk.bin")) << "JUNKJUNKJUNK";
    CHECK(box.run("run -w " + box.path("junk.bin") + " -i " + box.path("a.raw")).code == 3);

    REQUIRE(box.run("generate-weights --dims 16-8-4 -o " + box.path("small.bin")).code == 0);
    CHECK(box.run("run -w " + box.path("small.bin") + " -i " + box.path("a.raw")).code == 4);

    REQUIRE(box.run("generate-weights -o " + box.path("w.bin")).code == 0);
    CHECK(box.run("run -w " + box.path("w.bin") + " -i " + box.path("a.raw") + " -T 0").code == 4);
    CHECK(box.run("run -w " + box.path("w.bin") + " -i " + box.path("a.raw") + " --u-thr-high 0.5 --u-thr-low 1")
              .code == 4);
    CHECK(box.run("run --bogus").code == 1);
    CHECK(box.run("").code == 1);
    CHECK(box.run("--help").code == 0);
}

TEST_CASE("audit")
{
    Sandbox box;
    const Result ok = box.run("audit");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("audit passed") != std::string::npos);

    const Result slow = box.run("audit --clock-hz 20000000 --format json");
    CHECK(slow.code == 6);
    const auto doc = nlohmann::json::parse(slow.out);
    CHECK(doc["passed"] == false);
    for (const auto &row : doc["rows"]) {
        const std::string m = row["metric"];
        if (m == "hidden_layer_latency_s" || m == "output_layer_latency_s") {
            CHECK(row["pass"] == false);
        }
        if (m == "synapses" || m == "sram_macros" || m == "sram_bytes") {
            CHECK(row["pass"] == true);
        }
    }
    CHECK(box.run("audit --clock-hz 20000000 --tolerance 0.3").code == 0);
    CHECK(box.run("audit --clock-hz 0").code == 4);
}
