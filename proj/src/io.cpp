#include "ob2d/io.hpp"

#include "ob2d/error.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ob2d {
namespace {

namespace fs = std::filesystem;

std::string join(const std::vector<std::string>& cols) {
    std::string out;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out += ',';
        out += cols[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Little-endian binary encoding independent of the host byte order.
class Writer {
public:
    template <class T>
    void put(T v) {
        unsigned char b[sizeof(T)];
        std::memcpy(b, &v, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
        bytes_.insert(bytes_.end(), b, b + sizeof(T));
    }
    void put_raw(const char* s, std::size_t n) { bytes_.insert(bytes_.end(), s, s + n); }
    void put_doubles(const double* x, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) put(x[i]);
    }

    void commit(const std::string& path) const {
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot open '" + tmp + "' for writing");
            out.write(reinterpret_cast<const char*>(bytes_.data()), static_cast<std::streamsize>(bytes_.size()));
            if (!out) throw IoError("write failed for '" + tmp + "'");
        }
        std::error_code ec;
        fs::rename(tmp, path, ec);
        if (ec) throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
    }

private:
    std::vector<unsigned char> bytes_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open '" + path + "'");
        bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }

    template <class T>
    T get() {
        need(sizeof(T));
        unsigned char b[sizeof(T)];
        std::memcpy(b, bytes_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
        pos_ += sizeof(T);
        T v;
        std::memcpy(&v, b, sizeof(T));
        return v;
    }
    std::string get_raw(std::size_t n) {
        need(n);
        std::string s(bytes_.data() + pos_, n);
        pos_ += n;
        return s;
    }
    void get_doubles(double* x, std::size_t n) {
        need(n * sizeof(double));
        for (std::size_t i = 0; i < n; ++i) x[i] = get<double>();
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }
    const std::string& path() const { return path_; }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw IoError("'" + path_ + "' is truncated");
    }

    std::string path_;
    std::vector<char> bytes_;
    std::size_t pos_ = 0;
};

constexpr std::uint32_t checkpoint_format_version = 1;

} // namespace

std::string format_csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

LedgerWriter::LedgerWriter(const std::string& path, const std::vector<std::string>& columns, bool append)
    : path_(path), width_(columns.size()) {
    const std::string header = join(columns);
    if (append && fs::exists(path)) {
        std::ifstream in(path);
        std::string first;
        std::getline(in, first);
        if (first != header) throw IoError("ledger '" + path + "' has a different header; cannot append");
        file_ = std::fopen(path.c_str(), "a");
        if (file_ == nullptr) throw IoError("cannot open ledger '" + path + "' for appending");
        return;
    }
    file_ = std::fopen(path.c_str(), "w");
    if (file_ == nullptr) throw IoError("cannot create ledger '" + path + "'");
    std::fprintf(file_, "%s\n", header.c_str());
    std::fflush(file_);
}

LedgerWriter::~LedgerWriter() {
    if (file_ != nullptr) std::fclose(file_);
}

void LedgerWriter::write(const std::vector<double>& values) {
    if (values.size() != width_) throw IoError("ledger '" + path_ + "': row width does not match the header");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_csv_number(values[i]);
    }
    line += '\n';
    if (std::fputs(line.c_str(), file_) < 0 || std::fflush(file_) != 0)
        throw IoError("write failed for ledger '" + path_ + "'");
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("csv has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvTable t;
    std::string line;
    if (std::getline(in, line)) t.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) t.rows.push_back(split(line));
    return t;
}

Snapshot make_snapshot(const State& state, const ModelParams& params) {
    Snapshot s;
    const Grid& g = state.grid();
    s.n = static_cast<std::uint64_t>(g.n());
    s.length = g.length();
    s.time = state.time;
    s.alpha = params.alpha;
    s.gamma_u = params.gamma_u;
    const std::array<const ScalarField*, 5> src{&state.u[0], &state.u[1], &state.tau.xx, &state.tau.xy, &state.tau.yy};
    for (int c = 0; c < 5; ++c) s.fields[c].assign(src[c]->values().begin(), src[c]->values().end());
    return s;
}

State snapshot_state(const Snapshot& snap, const GridPtr& grid) {
    if (static_cast<std::uint64_t>(grid->n()) != snap.n || grid->length() != snap.length)
        throw ConfigError("snapshot grid does not match the requested grid");
    auto field = [&](int c, const char* name) {
        return ScalarField::from_physical(grid, RealArray(snap.fields[c].begin(), snap.fields[c].end()), name);
    };
    return State{snap.time, VectorField{{field(0, "u1"), field(1, "u2")}},
                 SymTensorField{field(2, "tau11"), field(3, "tau12"), field(4, "tau22")}};
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
    const std::size_t count = static_cast<std::size_t>(snap.n * snap.n);
    for (const auto& f : snap.fields)
        if (f.size() != count) throw IoError("snapshot for '" + path + "' has inconsistent field sizes");
    Writer w;
    w.put_raw("OB2D", 4);
    w.put(snapshot_format_version);
    w.put(snap.n);
    w.put(snap.length);
    w.put(snap.time);
    w.put(snap.alpha);
    w.put(snap.gamma_u);
    for (const auto& f : snap.fields) w.put_doubles(f.data(), f.size());
    w.commit(path);
}

Snapshot read_snapshot(const std::string& path) {
    Reader r(path);
    if (r.remaining() < snapshot_header_bytes) throw IoError("'" + path + "' is truncated (incomplete header)");
    if (r.get_raw(4) != "OB2D") throw IoError("'" + path + "' is not an OB2D snapshot");
    const auto version = r.get<std::uint32_t>();
    if (version != snapshot_format_version)
        throw IoError("'" + path + "' has unsupported snapshot version " + std::to_string(version));
    Snapshot s;
    s.n = r.get<std::uint64_t>();
    s.length = r.get<double>();
    s.time = r.get<double>();
    s.alpha = r.get<double>();
    s.gamma_u = r.get<double>();
    if (s.n < 8 || s.n > (1u << 16)) throw IoError("'" + path + "' declares an implausible grid size");
    const std::size_t count = static_cast<std::size_t>(s.n * s.n);
    if (r.remaining() != 5 * count * sizeof(double))
        throw IoError("'" + path + "' payload is " + std::to_string(r.remaining()) + " bytes, expected " +
                      std::to_string(5 * count * sizeof(double)));
    for (auto& f : s.fields) {
        f.resize(count);
        r.get_doubles(f.data(), count);
    }
    return s;
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
    Writer w;
    w.put_raw("OB2C", 4);
    w.put(checkpoint_format_version);
    w.put(cp.n);
    w.put(cp.length);
    w.put(cp.clock.origin);
    w.put(static_cast<std::int64_t>(cp.clock.step));
    w.put(cp.time);
    w.put(cp.dt);
    const std::size_t size = static_cast<std::size_t>(cp.n * (cp.n / 2 + 1));
    for (const auto& s : cp.spectra) {
        if (s.size() != size) throw IoError("checkpoint for '" + path + "' has inconsistent spectra");
        w.put_doubles(reinterpret_cast<const double*>(s.data()), 2 * size);
    }
    w.put(static_cast<std::uint64_t>(cp.monitor.size()));
    for (const auto& [name, value] : cp.monitor) {
        w.put(static_cast<std::uint32_t>(name.size()));
        w.put_raw(name.data(), name.size());
        w.put(value);
    }
    w.commit(path);
}

Checkpoint read_checkpoint(const std::string& path) {
    Reader r(path);
    if (r.get_raw(4) != "OB2C") throw IoError("'" + path + "' is not an OB2D checkpoint");
    const auto version = r.get<std::uint32_t>();
    if (version != checkpoint_format_version)
        throw IoError("'" + path + "' has unsupported checkpoint version " + std::to_string(version));
    Checkpoint cp;
    cp.n = r.get<std::uint64_t>();
    cp.length = r.get<double>();
    cp.clock.origin = r.get<double>();
    cp.clock.step = static_cast<long>(r.get<std::int64_t>());
    cp.time = r.get<double>();
    cp.dt = r.get<double>();
    if (cp.n < 8 || cp.n > (1u << 16)) throw IoError("'" + path + "' declares an implausible grid size");
    const std::size_t size = static_cast<std::size_t>(cp.n * (cp.n / 2 + 1));
    for (auto& s : cp.spectra) {
        s.resize(size);
        r.get_doubles(reinterpret_cast<double*>(s.data()), 2 * size);
    }
    const auto count = r.get<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto len = r.get<std::uint32_t>();
        std::string name = r.get_raw(len);
        const double v = r.get<double>();
        cp.monitor.emplace_back(std::move(name), v);
    }
    if (r.remaining() != 0) throw IoError("'" + path + "' has trailing bytes");
    return cp;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());
}

} // namespace ob2d
