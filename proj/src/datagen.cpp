#include "tomo/datagen.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tomo/threads.hpp"

namespace tomo {

std::string split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "train";
}

Split parse_split(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "val") return Split::Val;
    if (name == "test") return Split::Test;
    throw SchemaError("unknown split tag: " + name);
}

Dataset Dataset::select(const std::vector<Eigen::Index>& idx) const {
    Dataset out;
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    out.X.resize(m, X.cols());
    if (has_y()) out.Y.resize(m, Y.cols());
    if (has_labels()) out.labels.resize(m);
    out.split.resize(idx.size());
    out.state_id.resize(idx.size());
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index s = idx[static_cast<std::size_t>(r)];
        out.X.row(r) = X.row(s);
        if (has_y()) out.Y.row(r) = Y.row(s);
        if (has_labels()) out.labels(r) = labels(s);
        out.split[static_cast<std::size_t>(r)] = split[static_cast<std::size_t>(s)];
        out.state_id[static_cast<std::size_t>(r)] = state_id[static_cast<std::size_t>(s)];
    }
    out.meta = meta;
    return out;
}

std::vector<Eigen::Index> Dataset::indices_of(Split s) const {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index r = 0; r < rows(); ++r)
        if (split[static_cast<std::size_t>(r)] == s) idx.push_back(r);
    return idx;
}

Dataset Dataset::subset(Split s) const { return select(indices_of(s)); }

void Dataset::validate() const {
    const Eigen::Index n = rows();
    if (has_y() && Y.rows() != n) throw Error("dataset Y row count mismatch");
    if (has_labels() && labels.size() != n) throw Error("dataset label count mismatch");
    if (static_cast<Eigen::Index>(split.size()) != n) throw Error("dataset split count mismatch");
    if (static_cast<Eigen::Index>(state_id.size()) != n) throw Error("dataset id count mismatch");
}

Dataset concat(const std::vector<Dataset>& parts) {
    Dataset out;
    if (parts.empty()) return out;
    Eigen::Index n = 0;
    for (const auto& p : parts) n += p.rows();
    const bool with_y = std::all_of(parts.begin(), parts.end(),
                                    [](const Dataset& d) { return d.has_y(); });
    const bool with_labels = std::all_of(parts.begin(), parts.end(),
                                         [](const Dataset& d) { return d.has_labels(); });
    out.X.resize(n, parts.front().X.cols());
    if (with_y) out.Y.resize(n, parts.front().Y.cols());
    if (with_labels) out.labels.resize(n);
    out.split.reserve(static_cast<std::size_t>(n));
    out.state_id.reserve(static_cast<std::size_t>(n));
    Eigen::Index at = 0;
    std::int64_t id_offset = 0;
    for (const auto& p : parts) {
        out.X.middleRows(at, p.rows()) = p.X;
        if (with_y) out.Y.middleRows(at, p.rows()) = p.Y;
        if (with_labels) out.labels.segment(at, p.rows()) = p.labels;
        std::int64_t max_id = -1;
        for (Eigen::Index r = 0; r < p.rows(); ++r) {
            out.split.push_back(p.split[static_cast<std::size_t>(r)]);
            const std::int64_t id = p.state_id[static_cast<std::size_t>(r)] + id_offset;
            out.state_id.push_back(id);
            max_id = std::max(max_id, p.state_id[static_cast<std::size_t>(r)]);
        }
        id_offset += max_id + 1;
        at += p.rows();
    }
    return out;
}

GenConfig GenConfig::desk() { return GenConfig{}; }

GenConfig GenConfig::paper() {
    GenConfig cfg;
    cfg.n_pure = 1000000;
    cfg.n_mixed = 1000000;
    cfg.noisy_states_per_sigma = 3000;
    cfg.rotations_per_state = 400;
    cfg.distribution_mix = mix_for_rotations(400);
    return cfg;
}

std::array<int, 5> GenConfig::mix_for_rotations(int rotations) {
    static const std::array<int, 5> weights = {5, 5, 2, 2, 2};
    const int wsum = 16;
    std::array<int, 5> mix{};
    std::array<double, 5> rem{};
    int assigned = 0;
    for (int i = 0; i < 5; ++i) {
        const double exact = static_cast<double>(rotations) * weights[static_cast<std::size_t>(i)] / wsum;
        mix[static_cast<std::size_t>(i)] = static_cast<int>(exact);
        rem[static_cast<std::size_t>(i)] = exact - static_cast<double>(mix[static_cast<std::size_t>(i)]);
        assigned += mix[static_cast<std::size_t>(i)];
    }
    std::array<int, 5> order = {0, 1, 2, 3, 4};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return rem[static_cast<std::size_t>(a)] > rem[static_cast<std::size_t>(b)]; });
    for (int i = 0; assigned < rotations; ++i, ++assigned)
        ++mix[static_cast<std::size_t>(order[static_cast<std::size_t>(i % 5)])];
    return mix;
}

void GenConfig::validate() const {
    if (n_pure < 0 || n_mixed < 0 || noisy_states_per_sigma < 0)
        throw ConfigError("negative count in generator config");
    if (rotations_per_state < 1) throw ConfigError("rotations_per_state must be >= 1");
    const double rsum = split_ratios[0] + split_ratios[1] + split_ratios[2];
    if (std::abs(rsum - 1.0) > 1e-9) throw ConfigError("split_ratios must sum to 1");
    const int msum = std::accumulate(distribution_mix.begin(), distribution_mix.end(), 0);
    if (msum != rotations_per_state)
        throw ConfigError("distribution_mix must sum to rotations_per_state");
    if (sigma_list.empty()) throw ConfigError("sigma_list must not be empty");
}

std::array<Eigen::Index, 3> split_counts(Eigen::Index n, const std::array<double, 3>& ratios) {
    const Eigen::Index n_val = static_cast<Eigen::Index>(std::llround(ratios[1] * static_cast<double>(n)));
    const Eigen::Index n_test = static_cast<Eigen::Index>(std::llround(ratios[2] * static_cast<double>(n)));
    return {n - n_val - n_test, n_val, n_test};
}

namespace {

std::vector<Split> split_tags(Eigen::Index n, const std::array<double, 3>& ratios) {
    const auto counts = split_counts(n, ratios);
    std::vector<Split> tags(static_cast<std::size_t>(n), Split::Train);
    for (Eigen::Index r = counts[0]; r < counts[0] + counts[1]; ++r)
        tags[static_cast<std::size_t>(r)] = Split::Val;
    for (Eigen::Index r = counts[0] + counts[1]; r < n; ++r)
        tags[static_cast<std::size_t>(r)] = Split::Test;
    return tags;
}

DensityMatrix random_state(StateKind kind, Rng& rng) {
    return kind == StateKind::Pure ? random_pure(rng) : random_mixed(rng);
}

}  // namespace

Dataset gen_noiseless(StateKind kind, int n, std::uint64_t seed,
                      const std::array<double, 3>& ratios) {
    if (n < 1) throw ConfigError("gen_noiseless needs n >= 1");
    const ProjectorSet ps = build_projector_set();
    Dataset ds;
    ds.X.resize(n, kNumMeasurements);
    ds.Y.resize(n, kNumTau);
    ds.state_id.resize(static_cast<std::size_t>(n));
    const Rng base(seed);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        Rng rng = base.fork(i);
        const DensityMatrix rho = random_state(kind, rng);
        const MeasurementVector m = measure(rho, ps);
        const TauVector t = rho_to_tau(rho);
        for (int c = 0; c < kNumMeasurements; ++c) ds.X(static_cast<Eigen::Index>(i), c) = m[c];
        for (int c = 0; c < kNumTau; ++c) ds.Y(static_cast<Eigen::Index>(i), c) = t[c];
        ds.state_id[i] = static_cast<std::int64_t>(i);
    });
    ds.split = split_tags(n, ratios);
    ds.meta = {{"kind", kind == StateKind::Pure ? "pure" : "mixed"},
               {"noise", "none"},
               {"seed", seed},
               {"n", n}};
    return ds;
}

NoisyTriple gen_noisy(StateKind kind, int n_states, double sigma, const GenConfig& cfg,
                      std::uint64_t seed) {
    cfg.validate();
    if (n_states < 1) throw ConfigError("gen_noisy needs n_states >= 1");
    const int rot = cfg.rotations_per_state;
    const ProjectorSet ps = build_projector_set();

    // Distribution of each rotation row, in the fixed block order
    // normal / laplace / brown / blue / pink.
    std::vector<NoiseDistribution> row_dist;
    row_dist.reserve(static_cast<std::size_t>(rot));
    static const NoiseDistribution kOrder[5] = {
        NoiseDistribution::Normal, NoiseDistribution::Laplace, NoiseDistribution::Brown,
        NoiseDistribution::Blue, NoiseDistribution::Pink};
    for (int d = 0; d < 5; ++d)
        for (int c = 0; c < cfg.distribution_mix[static_cast<std::size_t>(d)]; ++c)
            row_dist.push_back(kOrder[d]);

    NoisyTriple out;
    const Eigen::Index n_rows = static_cast<Eigen::Index>(n_states) * rot;
    out.allnoise.X.resize(n_rows, kNumMeasurements);
    out.allnoise.Y.resize(n_rows, kNumTau);
    out.allnoise.split.resize(static_cast<std::size_t>(n_rows));
    out.allnoise.state_id.resize(static_cast<std::size_t>(n_rows));
    out.x_nonoise.resize(n_rows, kNumMeasurements);

    const std::vector<Split> state_split = split_tags(n_states, cfg.split_ratios);
    const Rng base(seed);
    parallel_for(static_cast<std::size_t>(n_states), [&](std::size_t i) {
        Rng rng = base.fork(i);
        const DensityMatrix rho = random_state(kind, rng);
        const MeasurementVector clean = measure(rho, ps);
        const TauVector t = rho_to_tau(rho);
        const std::uint64_t state_seed = rng.next_u64();
        for (int r = 0; r < rot; ++r) {
            NoiseSpec spec;
            spec.distribution = row_dist[static_cast<std::size_t>(r)];
            spec.sigma = sigma;
            spec.seed = derive_seed(state_seed, static_cast<std::uint64_t>(r));
            const MeasurementVector noisy = noisy_measure(rho, ps, spec);
            const Eigen::Index row = static_cast<Eigen::Index>(i) * rot + r;
            for (int c = 0; c < kNumMeasurements; ++c) {
                out.allnoise.X(row, c) = noisy[c];
                out.x_nonoise(row, c) = clean[c];
            }
            for (int c = 0; c < kNumTau; ++c) out.allnoise.Y(row, c) = t[c];
            out.allnoise.split[static_cast<std::size_t>(row)] = state_split[i];
            out.allnoise.state_id[static_cast<std::size_t>(row)] = static_cast<std::int64_t>(i);
        }
    });
    out.allnoise.meta = {{"kind", kind == StateKind::Pure ? "pure" : "mixed"},
                         {"noise", "rotation"},
                         {"sigma", sigma},
                         {"rotations_per_state", rot},
                         {"n_states", n_states},
                         {"seed", seed}};
    return out;
}

ClassifierSets build_classifier_sets(const Dataset& noiseless_pure,
                                     const Dataset& noiseless_mixed,
                                     const Dataset& noisy_pure,
                                     const Dataset& noisy_mixed) {
    auto with_label = [](Dataset d, int label) {
        d.labels = Eigen::VectorXi::Constant(d.rows(), label);
        d.Y.resize(0, 0);
        return d;
    };
    auto maybe = [](const Dataset& d) { return d.rows() > 0; };

    ClassifierSets out;
    {
        std::vector<Dataset> blocks;
        blocks.push_back(with_label(noiseless_pure, 0));
        if (maybe(noisy_pure)) blocks.push_back(with_label(noisy_pure, 0));
        blocks.push_back(with_label(noiseless_mixed, 1));
        if (maybe(noisy_mixed)) blocks.push_back(with_label(noisy_mixed, 1));
        out.ispure = concat(blocks);
        out.ispure.meta = {{"task", "ispure"}, {"label0", "pure"}, {"label1", "mixed"}};
    }
    {
        std::vector<Dataset> blocks;
        blocks.push_back(with_label(noiseless_pure, 0));
        blocks.push_back(with_label(noiseless_mixed, 0));
        if (maybe(noisy_pure)) blocks.push_back(with_label(noisy_pure, 1));
        if (maybe(noisy_mixed)) blocks.push_back(with_label(noisy_mixed, 1));
        out.isnoise = concat(blocks);
        out.isnoise.meta = {{"task", "isnoise"}, {"label0", "noiseless"}, {"label1", "noisy"}};
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'T', 'M', 'F', '1'};
constexpr std::uint32_t kSchemaVersion = 1;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json sidecar_for(const Dataset& ds) {
    return {{"schema_version", kSchemaVersion},
            {"rows", ds.rows()},
            {"x_cols", ds.X.cols()},
            {"y_cols", ds.has_y() ? ds.Y.cols() : 0},
            {"has_labels", ds.has_labels()},
            {"meta", ds.meta}};
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f << "state_id,split";
    if (ds.has_labels()) f << ",label";
    for (int c = 0; c < ds.X.cols(); ++c)
        f << ",m" << (c < 10 ? "0" : "") << c;
    if (ds.has_y())
        for (int c = 0; c < ds.Y.cols(); ++c) f << ",t" << (c < 10 ? "0" : "") << c;
    f << "\n";
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
        f << ds.state_id[static_cast<std::size_t>(r)] << ','
          << split_name(ds.split[static_cast<std::size_t>(r)]);
        if (ds.has_labels()) f << ',' << ds.labels(r);
        for (Eigen::Index c = 0; c < ds.X.cols(); ++c) {
            f << ',';
            if (!is_missing(ds.X(r, c))) f << format_double(ds.X(r, c));
        }
        if (ds.has_y())
            for (Eigen::Index c = 0; c < ds.Y.cols(); ++c) f << ',' << format_double(ds.Y(r, c));
        f << "\n";
    }
    if (!f) throw IoError("write failed: " + path.string());
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open: " + path.string());
    std::string line;
    if (!std::getline(f, line)) throw SchemaError("empty csv: " + path.string());
    const auto header = split_line(line);
    if (header.size() < 3 || header[0] != "state_id" || header[1] != "split")
        throw SchemaError("unexpected csv header in " + path.string());
    std::size_t at = 2;
    bool has_labels = false;
    if (at < header.size() && header[at] == "label") {
        has_labels = true;
        ++at;
    }
    const std::size_t x_begin = at;
    while (at < header.size() && header[at].size() == 3 && header[at][0] == 'm') ++at;
    const std::size_t x_cols = at - x_begin;
    const std::size_t y_begin = at;
    while (at < header.size() && header[at].size() == 3 && header[at][0] == 't') ++at;
    const std::size_t y_cols = at - y_begin;
    if (at != header.size() || x_cols == 0)
        throw SchemaError("unexpected csv columns in " + path.string());

    std::vector<std::vector<std::string>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw SchemaError("csv row width mismatch in " + path.string());
        rows.push_back(std::move(fields));
    }
    Dataset ds;
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    ds.X.resize(n, static_cast<Eigen::Index>(x_cols));
    if (y_cols > 0) ds.Y.resize(n, static_cast<Eigen::Index>(y_cols));
    if (has_labels) ds.labels.resize(n);
    ds.split.resize(rows.size());
    ds.state_id.resize(rows.size());
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& fields = rows[static_cast<std::size_t>(r)];
        ds.state_id[static_cast<std::size_t>(r)] = std::stoll(fields[0]);
        ds.split[static_cast<std::size_t>(r)] = parse_split(fields[1]);
        if (has_labels) ds.labels(r) = std::stoi(fields[2]);
        for (std::size_t c = 0; c < x_cols; ++c) {
            const std::string& cell = fields[x_begin + c];
            ds.X(r, static_cast<Eigen::Index>(c)) =
                cell.empty() ? missing_value() : std::stod(cell);
        }
        for (std::size_t c = 0; c < y_cols; ++c)
            ds.Y(r, static_cast<Eigen::Index>(c)) = std::stod(fields[y_begin + c]);
    }
    return ds;
}

template <typename T>
void write_raw(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw SchemaError("truncated binary dataset");
    return v;
}

void save_bin(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path.string());
    f.write(kMagic, 4);
    write_raw<std::uint32_t>(f, kSchemaVersion);
    write_raw<std::uint64_t>(f, static_cast<std::uint64_t>(ds.rows()));
    write_raw<std::uint32_t>(f, static_cast<std::uint32_t>(ds.X.cols()));
    write_raw<std::uint32_t>(f, static_cast<std::uint32_t>(ds.has_y() ? ds.Y.cols() : 0));
    write_raw<std::uint8_t>(f, ds.has_labels() ? 1 : 0);
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
        for (Eigen::Index c = 0; c < ds.X.cols(); ++c) write_raw<double>(f, ds.X(r, c));
        if (ds.has_y())
            for (Eigen::Index c = 0; c < ds.Y.cols(); ++c) write_raw<double>(f, ds.Y(r, c));
        if (ds.has_labels()) write_raw<std::int32_t>(f, ds.labels(r));
        write_raw<std::uint8_t>(f, static_cast<std::uint8_t>(ds.split[static_cast<std::size_t>(r)]));
        write_raw<std::int64_t>(f, ds.state_id[static_cast<std::size_t>(r)]);
    }
    if (!f) throw IoError("write failed: " + path.string());
}

Dataset load_bin(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path.string());
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw SchemaError("bad magic in " + path.string());
    const auto version = read_raw<std::uint32_t>(f);
    if (version != kSchemaVersion)
        throw SchemaError("unsupported dataset schema version in " + path.string());
    const auto n = static_cast<Eigen::Index>(read_raw<std::uint64_t>(f));
    const auto x_cols = static_cast<Eigen::Index>(read_raw<std::uint32_t>(f));
    const auto y_cols = static_cast<Eigen::Index>(read_raw<std::uint32_t>(f));
    const bool has_labels = read_raw<std::uint8_t>(f) != 0;
    if (n < 0 || x_cols <= 0 || x_cols > 4096 || y_cols < 0 || y_cols > 4096)
        throw SchemaError("implausible dataset header in " + path.string());
    Dataset ds;
    ds.X.resize(n, x_cols);
    if (y_cols > 0) ds.Y.resize(n, y_cols);
    if (has_labels) ds.labels.resize(n);
    ds.split.resize(static_cast<std::size_t>(n));
    ds.state_id.resize(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < x_cols; ++c) ds.X(r, c) = read_raw<double>(f);
        for (Eigen::Index c = 0; c < y_cols; ++c) ds.Y(r, c) = read_raw<double>(f);
        if (has_labels) ds.labels(r) = read_raw<std::int32_t>(f);
        ds.split[static_cast<std::size_t>(r)] = static_cast<Split>(read_raw<std::uint8_t>(f));
        ds.state_id[static_cast<std::size_t>(r)] = read_raw<std::int64_t>(f);
    }
    return ds;
}

}  // namespace

void save(const Dataset& ds, const std::filesystem::path& path) {
    ds.validate();
    if (path.extension() == ".csv")
        save_csv(ds, path);
    else if (path.extension() == ".bin")
        save_bin(ds, path);
    else
        throw ConfigError("unknown dataset extension: " + path.string());
    std::ofstream meta(path.string() + ".meta.json");
    if (!meta) throw IoError("cannot write sidecar for " + path.string());
    meta << sidecar_for(ds).dump(2) << "\n";
}

Dataset load(const std::filesystem::path& path) {
    Dataset ds;
    if (path.extension() == ".csv")
        ds = load_csv(path);
    else if (path.extension() == ".bin")
        ds = load_bin(path);
    else
        throw ConfigError("unknown dataset extension: " + path.string());
    const std::filesystem::path meta_path(path.string() + ".meta.json");
    if (std::filesystem::exists(meta_path)) {
        std::ifstream mf(meta_path);
        nlohmann::json side = nlohmann::json::parse(mf, nullptr, false);
        if (side.is_discarded()) throw SchemaError("corrupt sidecar: " + meta_path.string());
        if (side.value("schema_version", 0u) != kSchemaVersion)
            throw SchemaError("unsupported sidecar schema: " + meta_path.string());
        ds.meta = side.value("meta", nlohmann::json::object());
    }
    ds.validate();
    return ds;
}

}  // namespace tomo
