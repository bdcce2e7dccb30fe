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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ospk/core.hpp"
#include "ospk/errors.hpp"
#include "ospk/frame.hpp"
#include "ospk/golden.hpp"
#include "ospk/perf.hpp"
#include "ospk/report.hpp"
#include "ospk/weight_file.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ospk;

namespace {

// Exit codes are part of the command-line contract; see README.
enum Exit : int {
    kOk = 0,
    kUsage = 1,
    kIo = 2,
    kParse = 3,
    kConfig = 4,
    kDivergence = 5,
    kAuditFail = 6,
    kSimFault = 7,
    kInternal = 8,
};

std::vector<uint32_t> parse_dims(const std::string &text)
{
    std::vector<uint32_t> widths;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '-')) {
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(part, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (part.empty() || used != part.size() || v > UINT32_MAX) {
            throw ConfigError("bad layer width '" + part + "' in --dims " + text);
        }
        widths.push_back(static_cast<uint32_t>(v));
    }
    if (widths.empty()) {
        throw ConfigError("--dims is empty");
    }
    return widths;
}

void write_output(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    write_file(path, std::span(reinterpret_cast<const uint8_t *>(text.data()), text.size()));
}

std::string join(const std::vector<uint32_t> &v, char sep)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) {
            s += sep;
        }
        s += std::to_string(v[i]);
    }
    return s;
}

std::string format_seconds(double s)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << s * 1e6 << " us";
    return out.str();
}

bool wants_pgm(const std::string &path, const std::string &format)
{
    if (!format.empty()) {
        return format == "pgm";
    }
    return fs::path(path).extension() == ".pgm";
}

// ---------------------------------------------------------------- run

struct RunOptions {
    std::string model = "cycle";
    std::string weights;
    std::vector<std::string> images;
    uint32_t timesteps = 1;
    double clock_hz = ClockConfig::kDefaultCoreHz;
    std::string reset_mode;
    std::optional<double> u_thr_high;
    std::optional<double> u_thr_low;
    std::optional<double> beta;
    int threshold = kDefaultSpikeThreshold;
    std::string format = "human";
    std::string out;
    std::string trace_csv;
    std::optional<double> ops_per_synapse;
    unsigned jobs = 1;
};

struct ImageResult {
    std::optional<std::vector<uint32_t>> golden;
    std::optional<InferenceResult> cycle;
    std::optional<TimingReport> timing;
    std::optional<EnergyReport> energy;
};

NeuronParams build_params(const RunOptions &o)
{
    NeuronParams p;
    if (o.u_thr_high) {
        p.u_thr_high = qfixed_from_real(*o.u_thr_high);
    }
    if (o.u_thr_low) {
        p.u_thr_low = qfixed_from_real(*o.u_thr_low);
    }
    if (o.beta) {
        p.beta = DecayCode::from_beta(*o.beta);
    }
    if (!o.reset_mode.empty()) {
        p.reset_mode = reset_mode_from_string(o.reset_mode);
    }
    p.validate();
    return p;
}

json params_json(const NeuronParams &p)
{
    return {
        {"u_thr_high", p.u_thr_high.to_real()},
        {"u_thr_low", p.u_thr_low.to_real()},
        {"beta", p.beta.beta()},
        {"beta_code", p.beta.bits},
        {"reset_mode", to_string(p.reset_mode)},
    };
}

json counts_json(const std::vector<uint32_t> &counts)
{
    return {{"spike_counts", counts}, {"prediction", predict_class(counts)}};
}

int cmd_run(const RunOptions &o)
{
    ClockConfig clock{o.clock_hz};
    clock.validate();
    if (o.timesteps == 0) {
        throw ConfigError("-T must be at least 1");
    }
    if (o.threshold < 0 || o.threshold > 255) {
        throw ConfigError("--threshold must lie in [0, 255]");
    }
    const NeuronParams params = build_params(o);

    // Load and validate every input before simulating.
    const WeightStore weights = load_weight_file(read_file(o.weights));
    NetworkConfig config;
    config.layers = weights.dims();
    config.params.assign(config.layers.size(), params);
    config.validate();
    if (o.model != "golden") {
        config.validate_for_hardware();
    }
    std::vector<SpikeVector> frames;
    for (const auto &path : o.images) {
        const auto pixels = decode_image(read_file(path));
        if (pixels.size() != config.input_width()) {
            throw ConfigError("network input layer has " + std::to_string(config.input_width()) +
                              " neurons but " + path + " has " + std::to_string(pixels.size()) + " pixels");
        }
        frames.push_back(encode_frame(pixels, static_cast<uint8_t>(o.threshold)));
    }

    const bool run_golden = o.model != "cycle";
    const bool run_cycle = o.model != "golden";
    std::vector<ImageResult> results(frames.size());
    std::vector<std::exception_ptr> errors(frames.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        std::optional<CycleSimulator> sim;
        for (std::size_t i = next++; i < frames.size(); i = next++) {
            try {
                ImageResult &r = results[i];
                if (run_golden) {
                    r.golden = network_forward(frames[i], config, weights, o.timesteps);
                }
                if (run_cycle) {
                    if (!sim) {
                        sim.emplace(config, weights);
                    }
                    sim->core().record_events = !o.trace_csv.empty();
                    r.cycle = sim->run(frames[i], o.timesteps);
                    r.timing = timing_report(r.cycle->trace, clock);
                    r.energy = energy_report(r.cycle->trace, clock, PowerModel{}, o.ops_per_synapse);
                }
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::clamp<unsigned>(o.jobs, 1, static_cast<unsigned>(std::max<std::size_t>(1, frames.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    bool agree = true;
    for (const auto &r : results) {
        if (r.golden && r.cycle && *r.golden != r.cycle->spike_counts) {
            agree = false;
        }
    }

    if (!o.trace_csv.empty()) {
        for (std::size_t i = 0; i < results.size(); ++i) {
            fs::path p = o.trace_csv;
            if (results.size() > 1) {
                p = p.parent_path() / (p.stem().string() + "-" + std::to_string(i) + p.extension().string());
            }
            const std::string csv = results[i].cycle->trace.events_csv();
            write_file(p, std::span(reinterpret_cast<const uint8_t *>(csv.data()), csv.size()));
        }
    }

    const std::string verdict = agree ? "models agree" : "models diverge";
    std::ostringstream out;
    if (o.format == "json") {
        json j;
        j["model"] = o.model;
        j["timesteps"] = o.timesteps;
        j["clock_hz"] = clock.core_hz;
        j["spike_threshold"] = o.threshold;
        j["params"] = params_json(params);
        json layers = json::array();
        for (const auto &l : config.layers) {
            layers.push_back({{"fan_in", l.fan_in}, {"fan_out", l.fan_out}});
        }
        j["network"] = {{"layers", layers}, {"synapses", config.total_synapses()}};
        j["images"] = json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            const ImageResult &r = results[i];
            json img = {{"path", o.images[i]}};
            if (r.golden) {
                img["golden"] = counts_json(*r.golden);
            }
            if (r.cycle) {
                json c = counts_json(r.cycle->spike_counts);
                c["timing"] = to_json(*r.timing);
                c["energy"] = to_json(*r.energy);
                c["trace"] = trace_summary(r.cycle->trace);
                img["cycle"] = c;
            }
            if (r.golden && r.cycle) {
                img["agree"] = *r.golden == r.cycle->spike_counts;
            }
            j["images"].push_back(img);
        }
        if (run_golden && run_cycle) {
            j["models_agree"] = agree;
            j["verdict"] = verdict;
        }
        out << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        out << "image,model,prediction,spike_counts,cycles,latency_s,energy_uj,agree\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            const ImageResult &r = results[i];
            const std::string agree_cell =
                r.golden && r.cycle ? (*r.golden == r.cycle->spike_counts ? "true" : "false") : "";
            if (r.golden) {
                out << o.images[i] << ",golden," << predict_class(*r.golden) << ',' << join(*r.golden, ';') << ",,,,"
                    << agree_cell << '\n';
            }
            if (r.cycle) {
                out << o.images[i] << ",cycle," << r.cycle->prediction << ',' << join(r.cycle->spike_counts, ';') << ','
                    << r.timing->total_cycles << ',' << r.timing->total_seconds << ',' << r.energy->total_energy_uj
                    << ',' << agree_cell << '\n';
            }
        }
    } else {
        for (std::size_t i = 0; i < results.size(); ++i) {
            const ImageResult &r = results[i];
            out << o.images[i] << '\n';
            if (r.golden) {
                out << "  golden  prediction " << predict_class(*r.golden) << "  counts [" << join(*r.golden, ' ')
                    << "]\n";
            }
            if (r.cycle) {
                out << "  cycle   prediction " << r.cycle->prediction << "  counts ["
                    << join(r.cycle->spike_counts, ' ') << "]\n";
                out << "          cycles " << r.timing->total_cycles << "  latency "
                    << format_seconds(r.timing->total_seconds) << "  energy " << std::fixed << std::setprecision(3)
                    << r.energy->total_energy_uj << " uJ  activity " << std::setprecision(4) << r.energy->activity
                    << '\n';
                out.unsetf(std::ios::floatfield);
            }
        }
        if (run_golden && run_cycle) {
            out << verdict << '\n';
        }
    }
    write_output(o.out, out.str());
    if (!agree) {
        std::cerr << "error: " << verdict << '\n';
        return kDivergence;
    }
    return kOk;
}

// ---------------------------------------------------------------- audit

int cmd_audit(double clock_hz, double tolerance, const std::string &format, const std::string &path)
{
    ClockConfig clock{clock_hz};
    clock.validate();
    if (!(tolerance >= 0.0)) {
        throw ConfigError("--tolerance must be non-negative");
    }
    const AuditInputs in = canonical_audit_inputs(clock);
    const auto rows = consistency_audit(in, ReferenceTargets{}, tolerance);
    const bool ok = audit_passed(rows);

    std::ostringstream out;
    if (format == "json") {
        json j = {
            {"clock_hz", clock.core_hz},
            {"tolerance", tolerance},
            {"rows", to_json(rows)},
            {"timing", to_json(in.timestep)},
            {"energy_full_activity", to_json(energy_report(in.timestep.total_seconds, 1.0, PowerModel{}))},
            {"passed", ok},
        };
        out << j.dump(2) << '\n';
    } else if (format == "csv") {
        out << audit_csv(rows);
    } else {
        out << std::left << std::setw(34) << "metric" << std::setw(16) << "simulated" << std::setw(16) << "reference"
            << std::setw(10) << "error" << "result\n";
        for (const auto &r : rows) {
            std::ostringstream err;
            err << std::fixed << std::setprecision(2) << r.relative_error * 100.0 << '%';
            out << std::left << std::setw(34) << r.metric << std::setw(16) << r.simulated << std::setw(16) << r.reference
                << std::setw(10) << err.str() << (r.informational ? "info" : (r.pass ? "pass" : "FAIL")) << '\n';
        }
        out << (ok ? "audit passed" : "audit failed") << " at " << clock.core_hz / 1e6 << " MHz, tolerance "
            << tolerance * 100.0 << "%\n";
    }
    write_output(path, out.str());
    return ok ? kOk : kAuditFail;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"ospk: golden and cycle-accurate models of a binarized spiking-network accelerator core"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ospk 0.1.0");

    std::string dims = "1024-1024-10";
    uint64_t seed = 0;
    std::string out;
    auto *gen_w = app.add_subcommand("generate-weights", "Write seeded random bipolar weights");
    gen_w->add_option("--dims", dims, "Layer widths, input first (e.g. 1024-1024-10)")->capture_default_str();
    gen_w->add_option("--seed", seed, "RNG seed")->capture_default_str();
    gen_w->add_option("--out,-o", out, "Output weight file")->required();

    std::string image_format;
    auto *gen_i = app.add_subcommand("generate-image", "Write a seeded random 32x32 image");
    gen_i->add_option("--seed", seed, "RNG seed")->capture_default_str();
    gen_i->add_option("--out,-o", out, "Output image (.pgm for PGM, otherwise raw)")->required();
    gen_i->add_option("--format", image_format, "Force pgm or raw")->check(CLI::IsMember({"pgm", "raw"}));

    std::string in_path;
    auto *conv = app.add_subcommand("convert-image", "Convert between raw and PGM frames");
    conv->add_option("--in,-i", in_path, "Input image")->required();
    conv->add_option("--out,-o", out, "Output image")->required();
    conv->add_option("--format", image_format, "Force pgm or raw")->check(CLI::IsMember({"pgm", "raw"}));

    RunOptions ro;
    auto *run = app.add_subcommand("run", "Run inference on one or more images");
    run->add_option("--model", ro.model, "golden, cycle or both")
        ->check(CLI::IsMember({"golden", "cycle", "both"}))
        ->capture_default_str();
    run->add_option("--weights,-w", ro.weights, "Weight file")->required();
    run->add_option("--image,-i", ro.images, "Image file (repeatable)")->required();
    run->add_option("-T,--timesteps", ro.timesteps, "Timesteps per image")->capture_default_str();
    run->add_option("--clock-hz", ro.clock_hz, "Core clock for timing")->capture_default_str();
    run->add_option("--reset-mode", ro.reset_mode, "zero or subtract")->check(CLI::IsMember({"zero", "subtract"}));
    run->add_option("--u-thr-high", ro.u_thr_high, "High threshold (real)");
    run->add_option("--u-thr-low", ro.u_thr_low, "Low threshold (real)");
    run->add_option("--beta", ro.beta, "Decay rate in [0, 1), truncated to 8 shift terms");
    run->add_option("--threshold", ro.threshold, "Pixel binarization threshold")->capture_default_str();
    run->add_option("--format", ro.format, "json, csv or human")
        ->check(CLI::IsMember({"json", "csv", "human"}))
        ->capture_default_str();
    run->add_option("--out,-o", ro.out, "Report file (default stdout)");
    run->add_option("--trace-csv", ro.trace_csv, "Write the cycle-model event trace as CSV");
    run->add_option("--ops-per-synapse", ro.ops_per_synapse, "Report GOPS/W under this ops definition");
    run->add_option("--jobs,-j", ro.jobs, "Worker threads for multi-image runs")->capture_default_str();

    double audit_hz = ClockConfig::kDefaultCoreHz;
    double tolerance = 0.05;
    std::string audit_format = "human";
    auto *audit = app.add_subcommand("audit", "Compare the canonical network against reference figures");
    audit->add_option("--clock-hz", audit_hz, "Core clock")->capture_default_str();
    audit->add_option("--tolerance", tolerance, "Relative tolerance")->capture_default_str();
    audit->add_option("--format", audit_format, "json, csv or human")
        ->check(CLI::IsMember({"json", "csv", "human"}))
        ->capture_default_str();
    audit->add_option("--out,-o", out, "Report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gen_w) {
            const NetworkConfig config = NetworkConfig::dense(parse_dims(dims));
            config.validate();
            const auto bytes = serialize_weight_file(WeightStore::random(config.layers, seed));
            write_file(out, bytes);
            std::cerr << "wrote " << out << " (" << config.total_synapses() << " synapses, " << bytes.size()
                      << " bytes)\n";
            return kOk;
        }
        if (*gen_i) {
            const auto px = random_image(seed);
            write_file(out, wants_pgm(out, image_format) ? encode_pgm(px) : px);
            return kOk;
        }
        if (*conv) {
            const auto px = decode_image(read_file(in_path));
            write_file(out, wants_pgm(out, image_format) ? encode_pgm(px) : px);
            return kOk;
        }
        if (*run) {
            return cmd_run(ro);
        }
        if (*audit) {
            return cmd_audit(audit_hz, tolerance, audit_format, out);
        }
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kParse;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const SimulationFault &e) {
        std::cerr << "error: simulation fault: " << e.what() << '\n';
        return kSimFault;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
