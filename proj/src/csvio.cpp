#include "rri/csvio.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rri/models.hpp"

namespace rri {

std::string format_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw ValidationError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no,
                    const std::string& col) {
  const std::string t = trim(s);
  if (t.empty())
    throw ValidationError(path + " line " + std::to_string(line_no) + ": empty " + col);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ValidationError(path + " line " + std::to_string(line_no) + ": bad number '" + t +
                          "' in " + col);
  return v;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path,
                                                    std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) {
      if (first) continue;
      rows.emplace_back();  // keep line numbering stable for errors
      continue;
    }
    if (first) {
      if (header) *header = split_csv(t);
      first = false;
      continue;
    }
    rows.push_back(split_csv(t));
  }
  if (first) throw ValidationError(path + ": empty file");
  return rows;
}

RoadProfile read_profile_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_csv_rows(path, &header);
  if (header.empty() || header[0] != "station_m")
    throw ValidationError(path + " line 1: expected station_m as first column");
  int col_left = -1, col_right = -1, col_lat = -1, col_lon = -1;
  for (int c = 1; c < static_cast<int>(header.size()); ++c) {
    const std::string& h = header[c];
    if (h == "left_m" || h == "elevation_m")
      col_left = c;
    else if (h == "right_m")
      col_right = c;
    else if (h == "lat_deg")
      col_lat = c;
    else if (h == "lon_deg")
      col_lon = c;
    else
      throw ValidationError(path + " line 1: unknown column '" + h + "'");
  }
  if (col_left < 0) throw ValidationError(path + " line 1: no elevation column");
  if ((col_lat >= 0) != (col_lon >= 0))
    throw ValidationError(path + " line 1: lat_deg/lon_deg must appear together");

  RoadProfile prof;
  std::vector<double> stations;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t line_no = r + 2;
    const auto& row = rows[r];
    if (row.empty()) continue;
    if (row.size() != header.size())
      throw ValidationError(path + " line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(row.size()));
    stations.push_back(parse_double(row[0], path, line_no, "station_m"));
    prof.left.push_back(parse_double(row[col_left], path, line_no, "elevation"));
    if (col_right >= 0)
      prof.right.push_back(parse_double(row[col_right], path, line_no, "right_m"));
    if (col_lat >= 0)
      prof.geotags.push_back({parse_double(row[col_lat], path, line_no, "lat_deg"),
                              parse_double(row[col_lon], path, line_no, "lon_deg")});
  }
  if (stations.size() < 2) throw ValidationError(path + ": need at least 2 samples");
  const double S = stations[1] - stations[0];
  if (!(S > 0.0)) throw ValidationError(path + " line 3: stations must increase");
  for (std::size_t i = 1; i < stations.size(); ++i) {
    const double expect = stations[0] + static_cast<double>(i) * S;
    if (std::abs(stations[i] - expect) > 1e-4)
      throw ValidationError(path + " line " + std::to_string(i + 2) +
                            ": non-uniform station spacing");
  }
  prof.S = S;
  prof.validate();
  return prof;
}

void write_profile_csv(const std::string& path, const RoadProfile& profile) {
  profile.validate();
  std::string out = "station_m,";
  out += profile.two_track() ? "left_m,right_m" : "elevation_m";
  if (!profile.geotags.empty()) out += ",lat_deg,lon_deg";
  out += "\n";
  for (std::size_t i = 0; i < profile.left.size(); ++i) {
    out += format_g9(static_cast<double>(i) * profile.S);
    out += ",";
    out += format_g9(profile.left[i]);
    if (profile.two_track()) {
      out += ",";
      out += format_g9(profile.right[i]);
    }
    if (!profile.geotags.empty()) {
      out += ",";
      out += format_g9(profile.geotags[i][0]);
      out += ",";
      out += format_g9(profile.geotags[i][1]);
    }
    out += "\n";
  }
  atomic_write(path, out);
}

std::vector<DriveRecord> read_drive_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_csv_rows(path, &header);
  const std::vector<std::string> expect = {"t_s", "az_mps2", "ax_mps2",
                                           "v_mps", "lat_deg", "lon_deg"};
  if (header != expect)
    throw ValidationError(path + " line 1: expected header t_s,az_mps2,ax_mps2,v_mps,lat_deg,lon_deg");
  std::vector<DriveRecord> recs;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t line_no = r + 2;
    const auto& row = rows[r];
    if (row.empty()) continue;
    if (row.size() != 6)
      throw ValidationError(path + " line " + std::to_string(line_no) +
                            ": expected 6 fields, got " + std::to_string(row.size()));
    DriveRecord rec;
    rec.t = parse_double(row[0], path, line_no, "t_s");
    rec.az = parse_double(row[1], path, line_no, "az_mps2");
    rec.ax = parse_double(row[2], path, line_no, "ax_mps2");
    rec.v = parse_double(row[3], path, line_no, "v_mps");
    rec.lat = parse_double(row[4], path, line_no, "lat_deg");
    rec.lon = parse_double(row[5], path, line_no, "lon_deg");
    recs.push_back(rec);
  }
  return recs;
}

void write_drive_csv(const std::string& path, const std::vector<DriveRecord>& records) {
  std::string out = "t_s,az_mps2,ax_mps2,v_mps,lat_deg,lon_deg\n";
  for (const auto& r : records) {
    out += format_g9(r.t);
    out += ",";
    out += format_g9(r.az);
    out += ",";
    out += format_g9(r.ax);
    out += ",";
    out += format_g9(r.v);
    out += ",";
    out += format_g9(r.lat);
    out += ",";
    out += format_g9(r.lon);
    out += "\n";
  }
  atomic_write(path, out);
}

std::vector<IriSegment> read_segments_csv(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_csv_rows(path, &header);
  const std::vector<std::string> base = {"start_m", "end_m", "iri_mmpm",
                                         "n_samples", "transient", "partial"};
  bool geo = false;
  if (header.size() == 8 && header[6] == "lat_deg" && header[7] == "lon_deg")
    geo = true;
  else if (header.size() != 6)
    throw ValidationError(path + " line 1: unexpected segments header");
  for (std::size_t c = 0; c < 6; ++c)
    if (header[c] != base[c])
      throw ValidationError(path + " line 1: unexpected segments header");

  std::vector<IriSegment> segs;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t line_no = r + 2;
    const auto& row = rows[r];
    if (row.empty()) continue;
    if (row.size() != header.size())
      throw ValidationError(path + " line " + std::to_string(line_no) + ": field count");
    IriSegment s;
    s.start_station = parse_double(row[0], path, line_no, "start_m");
    s.end_station = parse_double(row[1], path, line_no, "end_m");
    s.iri = parse_double(row[2], path, line_no, "iri_mmpm");
    s.n_samples = static_cast<std::size_t>(parse_double(row[3], path, line_no, "n_samples"));
    s.transient = parse_double(row[4], path, line_no, "transient") != 0.0;
    s.partial = parse_double(row[5], path, line_no, "partial") != 0.0;
    if (geo)
      s.geotag = {{parse_double(row[6], path, line_no, "lat_deg"),
                   parse_double(row[7], path, line_no, "lon_deg")}};
    segs.push_back(s);
  }
  return segs;
}

void write_segments_csv(const std::string& path, const std::vector<IriSegment>& segments) {
  const bool geo = !segments.empty() && segments.front().geotag.has_value();
  std::string out = "start_m,end_m,iri_mmpm,n_samples,transient,partial";
  if (geo) out += ",lat_deg,lon_deg";
  out += "\n";
  for (const auto& s : segments) {
    out += format_g9(s.start_station);
    out += ",";
    out += format_g9(s.end_station);
    out += ",";
    out += format_g9(s.iri);
    out += ",";
    out += std::to_string(s.n_samples);
    out += ",";
    out += s.transient ? "1" : "0";
    out += ",";
    out += s.partial ? "1" : "0";
    if (geo) {
      const auto tag = s.geotag.value_or(std::array<double, 2>{0.0, 0.0});
      out += ",";
      out += format_g9(tag[0]);
      out += ",";
      out += format_g9(tag[1]);
    }
    out += "\n";
  }
  atomic_write(path, out);
}

void write_match_csv(const std::string& path, const MatchResult& result) {
  std::string out = "query_index,ref_index,distance_m,heading_diff_deg\n";
  for (std::size_t i = 0; i < result.matches.size(); ++i) {
    const Match& m = result.matches[i];
    out += std::to_string(i);
    out += ",";
    if (m.ref_index) {
      out += std::to_string(*m.ref_index);
      out += ",";
      out += format_g9(m.distance);
      out += ",";
      out += format_g9(m.heading_diff);
    } else {
      out += ",,";
    }
    out += "\n";
  }
  atomic_write(path, out);
}

VehicleParams read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  VehicleParams p;
  bool got_ms = false, got_mu = false, got_ks = false, got_cs = false, got_kt = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError(path + " line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const double val = parse_double(t.substr(eq + 1), path, line_no, key);
    if (key == "m_s") {
      p.m_s = val;
      got_ms = true;
    } else if (key == "m_u") {
      p.m_u = val;
      got_mu = true;
    } else if (key == "K_s") {
      p.K_s = val;
      got_ks = true;
    } else if (key == "C_s") {
      p.C_s = val;
      got_cs = true;
    } else if (key == "K_t") {
      p.K_t = val;
      got_kt = true;
    } else if (key == "I_s") {
      p.I_s = val;
    } else if (key == "l") {
      p.l = val;
    } else {
      throw ValidationError(path + " line " + std::to_string(line_no) + ": unknown key '" +
                            key + "'");
    }
  }
  if (!(got_ms && got_mu && got_ks && got_cs && got_kt))
    throw ValidationError(path + ": missing one of m_s, m_u, K_s, C_s, K_t");
  p.validate(false);
  return p;
}

void write_params_file(const std::string& path, const VehicleParams& p) {
  std::string out;
  out += "m_s=" + format_g9(p.m_s) + "\n";
  out += "m_u=" + format_g9(p.m_u) + "\n";
  out += "K_s=" + format_g9(p.K_s) + "\n";
  out += "C_s=" + format_g9(p.C_s) + "\n";
  out += "K_t=" + format_g9(p.K_t) + "\n";
  if (p.I_s) out += "I_s=" + format_g9(*p.I_s) + "\n";
  if (p.l) out += "l=" + format_g9(*p.l) + "\n";
  atomic_write(path, out);
}

VehicleParams resolve_params(const std::string& name_or_path) {
  if (name_or_path == "golden") return golden_car_params();
  if (name_or_path == "sedan") return sedan_params();
  return read_params_file(name_or_path);
}

void write_eval_report_csv(const std::string& path, const EvalReport& report) {
  std::string out = "bin,n,mean_err,std_err,rmse,distance_km\n";
  auto row = [&](const std::string& label, const EvalBin& b) {
    out += label;
    out += ",";
    out += std::to_string(b.n);
    out += ",";
    out += format_g9(b.mean_err);
    out += ",";
    out += format_g9(b.std_err);
    out += ",";
    out += format_g9(b.rmse);
    out += ",";
    out += format_g9(b.distance_km);
    out += "\n";
  };
  for (const auto& b : report.bins)
    row(format_g9(b.lo) + "-" + format_g9(b.hi), b);
  row("overall", report.overall);
  atomic_write(path, out);
}

void write_histogram_csv(const std::string& path, const EvalReport& report) {
  std::string out = "err_lo,err_hi,count\n";
  for (const auto& h : report.histogram) {
    out += format_g9(h.lo);
    out += ",";
    out += format_g9(h.lo + report.hist_width);
    out += ",";
    out += std::to_string(h.count);
    out += "\n";
  }
  atomic_write(path, out);
}

}  // namespace rri
