// Copyright 2026 The impc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "impc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "impc/analysis.hpp"
#include "impc/circuit.hpp"
#include "impc/hamiltonians.hpp"
#include "impc/pulses.hpp"

namespace impc {

namespace {

namespace fs = std::filesystem;

class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, const std::string& what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("malformed value for " + what + ": '" + std::string(text) + "'");
    }
    return value;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct Options {
    std::string circuit_path;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<double> tol;
    std::optional<int> truncation;
    std::string m_range;
};

struct Instance {
    Circuit circuit;
    PipelineConfig config;
};

Instance resolve(const Options& opts, bool need_truncation) {
    Circuit circuit = parse_circuit(read_file(opts.circuit_path));
    RunConfig rc;
    if (!opts.config_path.empty()) {
        rc = parse_config(read_file(opts.config_path));
    }
    PipelineConfig cfg;
    const int slots = static_cast<int>(circuit.size());
    cfg.period = rc.period.value_or(slots > 0 ? static_cast<double>(slots) : 1.0);
    cfg.tol = opts.tol ? *opts.tol : rc.tol.value_or(1e-9);
    cfg.particles = rc.particles.value_or(2);
    cfg.shift = rc.shift;
    cfg.epsilon = rc.epsilon;
    std::optional<double> width = rc.width;
    std::optional<int> truncation = opts.truncation ? opts.truncation : rc.truncation;
    if (rc.epsilon) {
        const auto sel = select_parameters(max_operator_norm(circuit), circuit.max_abs_angle(),
                                           slots, cfg.period, *rc.epsilon);
        width = width.value_or(sel.width);
        truncation = truncation.value_or(sel.truncation);
    }
    if (!width) {
        throw std::invalid_argument("pulse width c is required (set c or epsilon in the config)");
    }
    if (need_truncation && !truncation) {
        throw std::invalid_argument("truncation M is required (set M, epsilon or --m)");
    }
    cfg.width = *width;
    cfg.truncation = truncation.value_or(0);
    return Instance{std::move(circuit), cfg};
}

std::vector<int> parse_range(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) {
        throw std::invalid_argument("--m-range expects lo:hi or lo:hi:step");
    }
    const int lo = parse_number<int>(parts[0], "--m-range");
    const int hi = parse_number<int>(parts[1], "--m-range");
    const int step = parts.size() == 3 ? parse_number<int>(parts[2], "--m-range") : 1;
    if (lo < 0 || hi < lo || step < 1) {
        throw std::invalid_argument("--m-range needs 0 <= lo <= hi and step >= 1");
    }
    std::vector<int> out;
    for (int m = lo; m <= hi; m += step) {
        out.push_back(m);
    }
    return out;
}

int cmd_compile(const Options& opts, std::ostream& out) {
    const Instance inst = resolve(opts, true);
    const PipelineConfig& cfg = inst.config;
    const PulseSchedule schedule(inst.circuit, cfg.period, cfg.width);
    const FourierTable table = build_fourier_table(schedule, cfg.truncation);
    const ModeLayout layout(inst.circuit.n_modes(), cfg.truncation);
    const SectorBasis big(layout.mode_count(), cfg.particles);
    const SparseHermitian h_ind = build_H_ind(inst.circuit.n_modes(), table, big);
    const ErrorBudget budget = error_budget(inst.circuit, cfg.period, cfg.width, cfg.truncation,
                                            cfg.shift, cfg.epsilon);

    std::string fourier = "operator,m,re,im\n";
    for (const auto& [op, row] : table.rows()) {
        for (int m = -cfg.truncation; m <= cfg.truncation; ++m) {
            const Complex v = row[static_cast<std::size_t>(m + cfg.truncation)];
            fourier += to_string(op) + "," + std::to_string(m) + "," + fmt(v.real()) + "," +
                       fmt(v.imag()) + "\n";
        }
    }
    std::string dump = "row,col,re,im\n";
    for (const auto& e : h_ind.entries()) {
        dump += std::to_string(e.row) + "," + std::to_string(e.col) + "," + fmt(e.value.real()) +
                "," + fmt(e.value.imag()) + "\n";
    }
    nlohmann::json summary = {
        {"parameters",
         {{"P", cfg.period},
          {"c", cfg.width},
          {"M", cfg.truncation},
          {"S", budget.slots},
          {"a", budget.shift},
          {"alpha", budget.alpha},
          {"Y", budget.y},
          {"theta_max", budget.theta_max},
          {"particles", cfg.particles},
          {"epsilon", cfg.epsilon ? nlohmann::json(*cfg.epsilon) : nlohmann::json(nullptr)}}},
        {"dimensions",
         {{"circuit_modes", inst.circuit.n_modes()},
          {"cylinder_modes", layout.mode_count()},
          {"cylinder_sector", big.size()},
          {"h_ind_entries", h_ind.entries().size()}}},
        {"bounds", {{"e_area", budget.e_area}, {"e_fourier", budget.e_fourier}, {"e_total", budget.e_total}}},
    };
    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    write_atomic(dir / "fourier_table.csv", fourier);
    write_atomic(dir / "h_ind.csv", dump);
    write_atomic(dir / "summary.json", summary.dump(2) + "\n");
    out << "wrote " << (dir / "fourier_table.csv").string() << ", " << (dir / "h_ind.csv").string()
        << ", " << (dir / "summary.json").string() << "\n";
    return kExitOk;
}

int cmd_verify(const Options& opts, std::ostream& out) {
    const Instance inst = resolve(opts, true);
    const PipelineReport report = measure_pipeline(inst.circuit, inst.config);
    for (const auto& c : report.checks) {
        out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    }
    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    write_atomic(dir / "report.json", to_json(report).dump(2) + "\n");
    out << (report.passed() ? "verify: all checks passed" : "verify: some checks failed") << "\n";
    return report.passed() ? kExitOk : kExitFailed;
}

int cmd_sweep(const Options& opts, std::ostream& out) {
    if (opts.m_range.empty()) {
        throw std::invalid_argument("sweep needs --m-range lo:hi[:step]");
    }
    const std::vector<int> range = parse_range(opts.m_range);
    const Instance inst = resolve(opts, false);
    const PipelineConfig& cfg = inst.config;
    const SweepReport report = m_sweep(inst.circuit, cfg.period, cfg.width, range, cfg.tol,
                                       cfg.particles, cfg.shift);
    std::string csv = "M,distance,bound\n";
    for (const auto& p : report.points) {
        csv += std::to_string(p.truncation) + "," + fmt(p.distance) + "," + fmt(p.bound) + "\n";
    }
    const fs::path dir(opts.out_dir);
    fs::create_directories(dir);
    write_atomic(dir / "sweep.csv", csv);
    write_atomic(dir / "sweep.json", to_json(report).dump(2) + "\n");
    out << "slope " << fmt(report.slope) << " (analytic " << fmt(report.analytic_slope)
        << ", window " << report.window_lo << ".." << report.window_hi << ")\n";
    return kExitOk;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig rc;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": repeated key " + key);
        }
        if (key == "P") {
            rc.period = parse_number<double>(value, key);
        } else if (key == "c") {
            rc.width = parse_number<double>(value, key);
        } else if (key == "M") {
            rc.truncation = parse_number<int>(value, key);
        } else if (key == "epsilon") {
            rc.epsilon = parse_number<double>(value, key);
        } else if (key == "tol") {
            rc.tol = parse_number<double>(value, key);
        } else if (key == "particles") {
            rc.particles = parse_number<int>(value, key);
        } else if (key == "a_override") {
            rc.shift = parse_number<double>(value, key);
        } else {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key " + key);
        }
    }
    return rc;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InputError("cannot write " + tmp.string());
        }
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) {
            throw InputError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compile fermionic circuits into pulse schedules and cylinder Hamiltonians", "impc"};
    app.require_subcommand(1);
    Options opts;
    auto add_common = [&opts](CLI::App* sub) {
        sub->add_option("circuit", opts.circuit_path, "circuit file")->required();
        sub->add_option("--config", opts.config_path, "key=value parameter file");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--tol", opts.tol, "integrator tolerance");
        sub->add_option("--m", opts.truncation, "Fourier truncation order M");
    };
    CLI::App* compile = app.add_subcommand("compile", "write Fourier table, H_ind dump and summary");
    CLI::App* verify = app.add_subcommand("verify", "run the full verification chain");
    CLI::App* sweep = app.add_subcommand("sweep", "truncation sweep of U_diff against U_tr");
    add_common(compile);
    add_common(verify);
    add_common(sweep);
    sweep->add_option("--m-range", opts.m_range, "lo:hi[:step]")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*compile) {
            return cmd_compile(opts, out);
        }
        if (*verify) {
            return cmd_verify(opts, out);
        }
        return cmd_sweep(opts, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << opts.circuit_path << ": " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailed;
    }
}

}  // namespace impc
