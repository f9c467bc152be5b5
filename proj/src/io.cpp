#include "stackplan/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace stackplan::io {

using nlohmann::json;

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw std::logic_error("cannot format real");
    return std::string(buf, res.ptr);
}

double parse_real(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw FormatError("not a number: '" + std::string(text) + "'");
    return v;
}

namespace {

std::int64_t parse_int(std::string_view text) {
    std::int64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw FormatError("not an integer: '" + std::string(text) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

// Non-empty lines; a trailing CR is tolerated but never written.
std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

template <typename T>
T require(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    j["chip"] = {{"length_mm", s.chip.length_mm},
                 {"width_mm", s.chip.width_mm},
                 {"layers", s.chip.layers},
                 {"layer_thickness_mm", s.chip.layer_thickness_mm}};
    json comps = json::array();
    for (const auto& c : s.components)
        comps.push_back({{"id", c.id},
                         {"kind", std::string(to_string(c.kind))},
                         {"length_mm", c.length_mm},
                         {"width_mm", c.width_mm},
                         {"power_w", c.power_w}});
    j["components"] = std::move(comps);
    json net = json::array();
    for (const auto& e : s.netlist.edges) net.push_back(json::array({e.a, e.b, e.weight}));
    j["netlist"] = std::move(net);
    const auto& p = s.params;
    j["params"] = {{"population_size", p.population_size}, {"generations", p.generations},
                   {"crossover_prob", p.crossover_prob},   {"mutation_prob", p.mutation_prob},
                   {"rotation_prob", p.rotation_prob},     {"seed", p.seed},
                   {"workers", p.workers}};
    return j;
}

Scenario scenario_from_json(const json& j) {
    Scenario s;
    const json& chip = j.contains("chip") ? j.at("chip") : throw FormatError("missing key 'chip'");
    s.chip.length_mm = require<double>(chip, "length_mm");
    s.chip.width_mm = require<double>(chip, "width_mm");
    s.chip.layers = require<int>(chip, "layers");
    s.chip.layer_thickness_mm = require<double>(chip, "layer_thickness_mm");

    if (!j.contains("components") || !j.at("components").is_array())
        throw FormatError("missing array 'components'");
    for (const auto& c : j.at("components")) {
        ComponentSpec spec;
        spec.id = require<ComponentId>(c, "id");
        try {
            spec.kind = parse_component_kind(require<std::string>(c, "kind"));
        } catch (const std::invalid_argument& e) {
            throw FormatError(e.what());
        }
        spec.length_mm = require<double>(c, "length_mm");
        spec.width_mm = require<double>(c, "width_mm");
        spec.power_w = require<double>(c, "power_w");
        s.components.push_back(spec);
    }

    if (j.contains("netlist")) {
        if (!j.at("netlist").is_array()) throw FormatError("'netlist' must be an array");
        for (const auto& e : j.at("netlist")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3)
                throw FormatError("netlist entries must be [a, b] or [a, b, weight]");
            try {
                NetEdge edge{e.at(0).get<ComponentId>(), e.at(1).get<ComponentId>(),
                             e.size() == 3 ? e.at(2).get<double>() : 1.0};
                s.netlist.edges.push_back(edge);
            } catch (const json::exception& ex) {
                throw FormatError(std::string("bad netlist entry: ") + ex.what());
            }
        }
    }

    if (j.contains("params")) {
        const json& p = j.at("params");
        auto opt = [&](const char* key, auto& field) {
            if (p.contains(key)) field = require<std::decay_t<decltype(field)>>(p, key);
        };
        opt("population_size", s.params.population_size);
        opt("generations", s.params.generations);
        opt("crossover_prob", s.params.crossover_prob);
        opt("mutation_prob", s.params.mutation_prob);
        opt("rotation_prob", s.params.rotation_prob);
        opt("seed", s.params.seed);
        opt("workers", s.params.workers);
    }
    return s;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return os.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("cannot write " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const std::filesystem::path& path, const Scenario& s, const json& metadata) {
    json j = scenario_to_json(s);
    if (!metadata.is_null()) j["metadata"] = metadata;
    write_text(path, j.dump(2) + "\n");
}

std::string encode_chromosome(const Chromosome& c) {
    std::string out;
    for (std::size_t i = 0; i < c.order.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(c.order[i]);
        if (c.rotated[i]) out += 'r';
    }
    return out;
}

Chromosome decode_chromosome(std::string_view text) {
    Chromosome c;
    if (text.empty()) return c;
    for (auto gene : split(text, '-')) {
        const bool rotated = !gene.empty() && gene.back() == 'r';
        if (rotated) gene.remove_suffix(1);
        if (gene.empty()) throw FormatError("empty gene in chromosome '" + std::string(text) + "'");
        c.order.push_back(parse_int(gene));
        c.rotated.push_back(rotated);
    }
    return c;
}

std::string front_csv(const std::vector<FrontRow>& rows) {
    std::string out = "j1,j2,j3,chromosome\n";
    for (const auto& r : rows) {
        out += std::to_string(r.objectives.j1);
        out += ',';
        out += format_real(r.objectives.j2);
        out += ',';
        out += format_real(r.objectives.j3);
        out += ',';
        out += encode_chromosome(r.chromosome);
        out += '\n';
    }
    return out;
}

std::vector<FrontRow> parse_front_csv(std::string_view text) {
    const auto ls = lines(text);
    if (ls.empty() || ls.front() != "j1,j2,j3,chromosome") throw FormatError("front file lacks its header");
    std::vector<FrontRow> rows;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        const auto f = split(ls[i], ',');
        if (f.size() != 4) throw FormatError("front row " + std::to_string(i) + " needs 4 fields");
        rows.push_back({{parse_int(f[0]), parse_real(f[1]), parse_real(f[2])}, decode_chromosome(f[3])});
    }
    return rows;
}

namespace {

constexpr std::string_view kArchiveHeader =
    "generation,feasible,j2_min,j2_mean,j2_max,j3_min,j3_mean,j3_max,"
    "evaluation_s,evaluation_max_worker_s,selection_s,crossover_s,mutation_s,reduction_s,total_s";

void append_record(std::string& out, const GenerationRecord& rec) {
    const GenerationStats s = summarize(rec);
    out += std::to_string(s.generation);
    out += ',';
    out += std::to_string(s.feasible);
    for (double v : {s.j2_min, s.j2_mean, s.j2_max, s.j3_min, s.j3_mean, s.j3_max}) {
        out += ',';
        if (s.feasible) out += format_real(v);
    }
    const PhaseTimings& t = rec.timings;
    for (double v : {t.evaluation, t.evaluation_max_worker, t.selection, t.crossover, t.mutation, t.reduction,
                     t.total}) {
        out += ',';
        out += format_real(v);
    }
    out += '\n';
}

std::vector<std::vector<std::string_view>> archive_rows(std::string_view text) {
    const auto ls = lines(text);
    if (ls.empty() || ls.front() != kArchiveHeader) throw FormatError("archive file lacks its header");
    std::vector<std::vector<std::string_view>> rows;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto f = split(ls[i], ',');
        if (f.size() != 15) throw FormatError("archive row " + std::to_string(i) + " needs 15 fields");
        rows.push_back(std::move(f));
    }
    return rows;
}

}  // namespace

std::string archive_csv(const RunArchive& archive) {
    std::string out(kArchiveHeader);
    out += '\n';
    append_record(out, archive.initial);
    for (const auto& g : archive.generations) append_record(out, g);
    return out;
}

std::vector<GenerationStats> parse_archive_stats(std::string_view text) {
    std::vector<GenerationStats> out;
    for (const auto& f : archive_rows(text)) {
        GenerationStats s;
        s.generation = static_cast<int>(parse_int(f[0]));
        s.feasible = static_cast<std::size_t>(parse_int(f[1]));
        if (s.feasible) {
            s.j2_min = parse_real(f[2]);
            s.j2_mean = parse_real(f[3]);
            s.j2_max = parse_real(f[4]);
            s.j3_min = parse_real(f[5]);
            s.j3_mean = parse_real(f[6]);
            s.j3_max = parse_real(f[7]);
        }
        out.push_back(s);
    }
    return out;
}

std::vector<PhaseTimings> parse_archive_timings(std::string_view text) {
    std::vector<PhaseTimings> out;
    for (const auto& f : archive_rows(text)) {
        PhaseTimings t;
        t.evaluation = parse_real(f[8]);
        t.evaluation_max_worker = parse_real(f[9]);
        t.selection = parse_real(f[10]);
        t.crossover = parse_real(f[11]);
        t.mutation = parse_real(f[12]);
        t.reduction = parse_real(f[13]);
        t.total = parse_real(f[14]);
        out.push_back(t);
    }
    return out;
}

std::string power_grid_csv(const PowerGrid& grid) {
    std::string out = "layer,ix,iy,x_mm,y_mm,power_w\n";
    for (std::size_t l = 0; l < grid.layers.size(); ++l)
        for (std::size_t iy = 0; iy < grid.cells_y; ++iy)
            for (std::size_t ix = 0; ix < grid.cells_x; ++ix) {
                out += std::to_string(l) + ',' + std::to_string(ix) + ',' + std::to_string(iy) + ',';
                out += format_real(static_cast<double>(ix) * grid.cell_mm) + ',';
                out += format_real(static_cast<double>(iy) * grid.cell_mm) + ',';
                out += format_real(grid.at(l, ix, iy));
                out += '\n';
            }
    return out;
}

std::string sweep_csv(const SweepTable& table) {
    std::string out = "workers,run,wall_seconds,speedup\n";
    for (const auto& r : table.rows)
        out += std::to_string(r.workers) + ',' + std::to_string(r.run) + ',' + format_real(r.wall_seconds) +
               ',' + format_real(r.speedup) + '\n';
    return out;
}

std::string sweep_summary_csv(const SweepTable& table) {
    std::string out = "workers,mean_wall_seconds,speedup\n";
    for (const auto& s : table.summary)
        out += std::to_string(s.workers) + ',' + format_real(s.mean_wall_seconds) + ',' +
               format_real(s.speedup) + '\n';
    return out;
}

std::string matrix_csv(const Matrix& m) {
    std::string out = "run";
    for (std::size_t g = 0; g < m.cols; ++g) out += ",g" + std::to_string(g + 1);
    out += '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        out += std::to_string(r + 1);
        for (std::size_t g = 0; g < m.cols; ++g) out += ',' + format_real(m(r, g));
        out += '\n';
    }
    return out;
}

}  // namespace stackplan::io
