#include <cmath>
#include <concepts>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "swelab/csv.hpp"
#include "swelab/errors.hpp"
#include "swelab/experiments.hpp"

namespace swelab::experiments {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

using KvMap = std::map<std::string, std::string>;  // "section/key" -> value

KvMap parse_ini(std::istream& in) {
    KvMap kv;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw Error("config line " + std::to_string(lineno) + ": empty key");
        kv[section + "/" + key] = val;
    }
    return kv;
}

class ConfigReader {
public:
    explicit ConfigReader(KvMap kv) : kv_(std::move(kv)) {}

    void number(const std::string& path, double& out) {
        auto it = kv_.find(path);
        if (it == kv_.end()) return;
        out = csv::parse_double(it->second, "config " + path);
        used_.insert(path);
    }
    void integer(const std::string& path, int& out) {
        double v = out;
        number(path, v);
        out = static_cast<int>(std::llround(v));
    }
    template <typename T>
        requires std::unsigned_integral<T>
    void integer(const std::string& path, T& out) {
        auto it = kv_.find(path);
        if (it == kv_.end()) return;
        out = static_cast<T>(std::stoull(it->second));
        used_.insert(path);
    }
    void boolean(const std::string& path, bool& out) {
        auto it = kv_.find(path);
        if (it == kv_.end()) return;
        const std::string& v = it->second;
        if (v == "true" || v == "1")
            out = true;
        else if (v == "false" || v == "0")
            out = false;
        else
            throw Error("config " + path + ": expected true/false");
        used_.insert(path);
    }
    void text(const std::string& path, std::string& out) {
        auto it = kv_.find(path);
        if (it == kv_.end()) return;
        out = it->second;
        used_.insert(path);
    }
    void number_list(const std::string& path, std::vector<double>& out) {
        auto it = kv_.find(path);
        if (it == kv_.end()) return;
        out.clear();
        for (const auto& f : csv::split_line(it->second))
            out.push_back(csv::parse_double(trim(f), "config " + path));
        used_.insert(path);
    }

    void check_all_used() const {
        for (const auto& [path, value] : kv_)
            if (!used_.count(path)) throw Error("config: unknown key '" + path + "'");
    }

private:
    KvMap kv_;
    std::set<std::string> used_;
};

std::vector<double> to_mm(const std::vector<double>& m) {
    std::vector<double> out;
    for (double v : m) out.push_back(v * 1000.0);
    return out;
}

std::vector<double> from_mm(const std::vector<double>& mm) {
    std::vector<double> out;
    for (double v : mm) out.push_back(v / 1000.0);
    return out;
}

}  // namespace

SweepConfig load_config(std::istream& in) {
    ConfigReader r(parse_ini(in));
    SweepConfig c;

    std::vector<double> levels_mm = to_mm(c.gel_levels_m);
    r.number_list("sweep/gel_levels_mm", levels_mm);
    c.gel_levels_m = from_mm(levels_mm);
    r.number_list("sweep/frequencies_hz", c.frequencies_hz);
    r.integer("sweep/repetitions", c.repetitions);
    r.number("sweep/noise_sigma_m", c.noise_sigma_m);
    r.integer("sweep/base_seed", c.base_seed);
    r.integer("sweep/threads", c.threads);
    r.boolean("sweep/emit_kspace", c.emit_kspace);
    r.text("sweep/out_dir", c.out_dir);

    r.number("geometry/pad_length_m", c.geometry.pad_length);
    r.number("geometry/pad_height_m", c.geometry.pad_height);
    r.number("geometry/sponge_length_m", c.geometry.sponge_length);
    r.number("geometry/sponge_height_m", c.geometry.sponge_height);
    r.number("geometry/element_size_m", c.geometry.element_size);
    r.number("geometry/absorber_width_m", c.geometry.absorber_width);

    r.number("excitation/amplitude_m", c.excitation.amplitude_m);
    r.number("excitation/duration_s", c.excitation.duration_s);
    r.number("excitation/contact_width_m", c.excitation.contact_width_m);

    r.number("materials.pad/youngs_modulus_pa", c.pad.youngs_modulus);
    r.number("materials.pad/poisson_ratio", c.pad.poisson_ratio);
    r.number("materials.pad/rho_kgm3", c.pad.rho);

    r.number("materials.gel/mu1_pa", c.gel.mu1);
    r.number("materials.gel/mu2_pas", c.gel.mu2);
    r.number("materials.gel/rho_kgm3", c.gel.rho);

    r.number("materials.sponge/mu1_pa", c.sponge.material.mu1);
    r.number("materials.sponge/mu2_pas", c.sponge.material.mu2);
    r.number("materials.sponge/rho_kgm3", c.sponge.material.rho);
    r.number("materials.sponge/void_ratio", c.sponge.void_ratio);
    r.boolean("materials.sponge/use_effective_density", c.sponge.use_effective_density);

    r.number("solver/cfl_factor", c.solver.cfl_factor);
    r.number("solver/frame_rate_hz", c.solver.recording.frame_rate_hz);
    r.number("solver/record_start_offset_m", c.solver.recording.start_offset_m);
    r.integer("solver/record_positions", c.solver.recording.position_count);
    r.number("solver/instability_bound_factor", c.solver.bound_factor);

    r.check_all_used();
    c.validate();
    return c;
}

SweepConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config", path);
    return load_config(in);
}

void write_config(std::ostream& out, const SweepConfig& c) {
    using csv::format_double;
    out << "# swelab sweep configuration / run manifest\n";
    out << "# per-repetition noise seed = base_seed + row index, where rows are\n";
    out << "# ordered by (gel level, frequency, repetition)\n";
    out << "[sweep]\n";
    out << "gel_levels_mm = ";
    for (std::size_t i = 0; i < c.gel_levels_m.size(); ++i)
        out << (i ? "," : "") << format_double(c.gel_levels_m[i] * 1000.0);
    out << "\nfrequencies_hz = ";
    for (std::size_t i = 0; i < c.frequencies_hz.size(); ++i)
        out << (i ? "," : "") << format_double(c.frequencies_hz[i]);
    out << "\nrepetitions = " << c.repetitions;
    out << "\nnoise_sigma_m = " << format_double(c.noise_sigma_m);
    out << "\nbase_seed = " << c.base_seed;
    out << "\nthreads = " << c.threads;
    out << "\nemit_kspace = " << (c.emit_kspace ? "true" : "false");
    out << "\nout_dir = " << c.out_dir << "\n\n";

    out << "[geometry]\n";
    out << "pad_length_m = " << format_double(c.geometry.pad_length) << '\n';
    out << "pad_height_m = " << format_double(c.geometry.pad_height) << '\n';
    out << "sponge_length_m = " << format_double(c.geometry.sponge_length) << '\n';
    out << "sponge_height_m = " << format_double(c.geometry.sponge_height) << '\n';
    out << "element_size_m = " << format_double(c.geometry.element_size) << '\n';
    out << "absorber_width_m = " << format_double(c.geometry.absorber_width) << "\n\n";

    out << "[excitation]\n";
    out << "amplitude_m = " << format_double(c.excitation.amplitude_m) << '\n';
    out << "duration_s = " << format_double(c.excitation.duration_s) << '\n';
    out << "contact_width_m = " << format_double(c.excitation.contact_width_m) << "\n\n";

    out << "[materials.pad]\n";
    out << "youngs_modulus_pa = " << format_double(c.pad.youngs_modulus) << '\n';
    out << "poisson_ratio = " << format_double(c.pad.poisson_ratio) << '\n';
    out << "rho_kgm3 = " << format_double(c.pad.rho) << "\n\n";

    out << "[materials.gel]\n";
    out << "mu1_pa = " << format_double(c.gel.mu1) << '\n';
    out << "mu2_pas = " << format_double(c.gel.mu2) << '\n';
    out << "rho_kgm3 = " << format_double(c.gel.rho) << "\n\n";

    out << "[materials.sponge]\n";
    out << "mu1_pa = " << format_double(c.sponge.material.mu1) << '\n';
    out << "mu2_pas = " << format_double(c.sponge.material.mu2) << '\n';
    out << "rho_kgm3 = " << format_double(c.sponge.material.rho) << '\n';
    out << "void_ratio = " << format_double(c.sponge.void_ratio) << '\n';
    out << "use_effective_density = " << (c.sponge.use_effective_density ? "true" : "false")
        << "\n\n";

    out << "[solver]\n";
    out << "cfl_factor = " << format_double(c.solver.cfl_factor) << '\n';
    out << "frame_rate_hz = " << format_double(c.solver.recording.frame_rate_hz) << '\n';
    out << "record_start_offset_m = " << format_double(c.solver.recording.start_offset_m)
        << '\n';
    out << "record_positions = " << c.solver.recording.position_count << '\n';
    out << "instability_bound_factor = " << format_double(c.solver.bound_factor) << '\n';
}

}  // namespace swelab::experiments
