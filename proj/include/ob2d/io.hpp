#pragma once

#include "ob2d/diagnostics.hpp"
#include "ob2d/model.hpp"
#include "ob2d/timestepper.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace ob2d {

/// CSV ledger: one header row, then one row per record; every number in
/// %.16e (17 significant digits). Rows are flushed as they are written.
class LedgerWriter {
public:
    /// Creates (or, with append, extends) the file. The header is written only
    /// for a new file; when appending, the existing header must match.
    LedgerWriter(const std::string& path, const std::vector<std::string>& columns, bool append = false);
    ~LedgerWriter();
    LedgerWriter(const LedgerWriter&) = delete;
    LedgerWriter& operator=(const LedgerWriter&) = delete;

    void write(const std::vector<double>& values);
    void write(const DiagnosticsRecord& record) { write(record.values()); }

private:
    std::string path_;
    std::FILE* file_ = nullptr;
    std::size_t width_ = 0;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
std::string format_csv_number(double v);

struct Snapshot {
    std::uint64_t n = 0;
    double length = 0.0;
    double time = 0.0;
    double alpha = 0.0;
    double gamma_u = 0.0;
    /// u1, u2, tau11, tau12, tau22, each n*n row-major.
    std::array<std::vector<double>, 5> fields;
};

inline constexpr std::uint32_t snapshot_format_version = 1;
inline constexpr std::size_t snapshot_header_bytes = 48;

Snapshot make_snapshot(const State& state, const ModelParams& params);
/// Rebuilds fields from the physical samples on a matching grid.
State snapshot_state(const Snapshot& snap, const GridPtr& grid);
void write_snapshot(const std::string& path, const Snapshot& snap);
/// Throws IoError on a missing, foreign, truncated or oversized file.
Snapshot read_snapshot(const std::string& path);

/// Everything needed to continue a run bit for bit.
struct Checkpoint {
    std::uint64_t n = 0;
    double length = 0.0;
    Clock clock;  // origin and number of steps taken
    double time = 0.0;
    double dt = 0.0;
    StateSpectra spectra;
    NamedValues monitor;
};

void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

/// Creates the directory and its parents; IoError on failure.
void ensure_directory(const std::string& path);

} // namespace ob2d
