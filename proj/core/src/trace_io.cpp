#include "bundlekit/trace_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "bundlekit/errors.hpp"
#include "bundlekit/hexfloat.hpp"

namespace bundlekit {

const char* const kTraceHeader =
    "iter,step_kind,f_y,gap,m,best_prox_val,xi,dist_y_to_center,null_run_len,t,criterion_slack";

void write_trace_header(std::ostream& out) { out << kTraceHeader << '\n'; }

void write_trace_row(std::ostream& out, const TraceRecord& r) {
  out << r.iter << ',' << to_string(r.kind) << ',' << shortest_decimal(r.f_y) << ','
      << shortest_decimal(r.gap) << ',' << shortest_decimal(r.m) << ',' << shortest_decimal(r.best_prox_val)
      << ',' << shortest_decimal(r.xi) << ',' << shortest_decimal(r.dist_y_to_center) << ','
      << r.null_run_len << ',' << shortest_decimal(r.t) << ',' << shortest_decimal(r.criterion_slack) << '\n';
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  write_trace_header(out);
  for (const TraceRecord& r : trace) write_trace_row(out, r);
}

std::vector<TraceRecord> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw ConfigError("trace: unexpected header", 1);

  std::vector<TraceRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream fields(line);
    std::string tok;
    while (std::getline(fields, tok, ',')) f.push_back(tok);
    if (f.size() != 11) throw ConfigError("trace: expected 11 fields, got " + std::to_string(f.size()), line_no);
    TraceRecord r;
    try {
      r.iter = std::stol(f[0]);
      if (f[1] == "serious") {
        r.kind = StepKind::Serious;
      } else if (f[1] == "null") {
        r.kind = StepKind::Null;
      } else {
        throw ConfigError("trace: unknown step kind '" + f[1] + "'", line_no);
      }
      r.f_y = parse_hexfloat(f[2]);
      r.gap = parse_hexfloat(f[3]);
      r.m = parse_hexfloat(f[4]);
      r.best_prox_val = parse_hexfloat(f[5]);
      r.xi = parse_hexfloat(f[6]);
      r.dist_y_to_center = parse_hexfloat(f[7]);
      r.null_run_len = std::stol(f[8]);
      r.t = parse_hexfloat(f[9]);
      r.criterion_slack = parse_hexfloat(f[10]);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), line_no);
    } catch (const std::exception&) {
      throw ConfigError("trace: malformed integer field", line_no);
    }
    out.push_back(std::move(r));
  }
  // Serious counts are implied by the row order.
  long k = 0;
  for (TraceRecord& r : out) {
    if (r.kind == StepKind::Serious) ++k;
    r.serious_count = k;
  }
  return out;
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

CsvTraceSink::CsvTraceSink(const std::string& path) : out_(path) {
  if (!out_) throw ConfigError("cannot write trace file '" + path + "'");
  write_trace_header(out_);
}

void CsvTraceSink::record(const TraceRecord& rec) { write_trace_row(out_, rec); }

}  // namespace bundlekit
