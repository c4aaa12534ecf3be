#pragma once

#include <string>
#include <vector>

#include "rri/eval.hpp"
#include "rri/geomatch.hpp"
#include "rri/iri.hpp"
#include "rri/types.hpp"

namespace rri {

// All writers emit floats with "%.9g" and write atomically (temp file in
// the target directory, then rename). All readers validate headers and
// report 1-based line numbers in error messages.

// profile.csv: station_m,left_m[,right_m][,lat_deg,lon_deg]
// (single-track files may use header elevation_m instead of left_m)
RoadProfile read_profile_csv(const std::string& path);
void write_profile_csv(const std::string& path, const RoadProfile& profile);

// drive.csv: t_s,az_mps2,ax_mps2,v_mps,lat_deg,lon_deg
std::vector<DriveRecord> read_drive_csv(const std::string& path);
void write_drive_csv(const std::string& path, const std::vector<DriveRecord>& records);

// segments.csv: start_m,end_m,iri_mmpm,n_samples,transient,partial[,lat_deg,lon_deg]
std::vector<IriSegment> read_segments_csv(const std::string& path);
void write_segments_csv(const std::string& path, const std::vector<IriSegment>& segments);

// match.csv: query_index,ref_index,distance_m,heading_diff_deg
void write_match_csv(const std::string& path, const MatchResult& result);

// key=value parameter files ('#' comments). Accepts keys m_s, m_u, K_s,
// C_s, K_t, I_s, l; I_s and l are optional (quarter-car sets omit them).
VehicleParams read_params_file(const std::string& path);
void write_params_file(const std::string& path, const VehicleParams& p);

// Resolve a --params argument: the built-in names "golden" and "sedan",
// otherwise a file path.
VehicleParams resolve_params(const std::string& name_or_path);

// eval report + error histogram
void write_eval_report_csv(const std::string& path, const EvalReport& report);
void write_histogram_csv(const std::string& path, const EvalReport& report);

// shared low-level helpers
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path,
                                                    std::vector<std::string>* header = nullptr);
void atomic_write(const std::string& path, const std::string& content);

}  // namespace rri
