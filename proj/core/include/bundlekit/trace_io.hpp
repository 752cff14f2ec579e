#pragma once

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "bundlekit/solvers.hpp"

namespace bundlekit {

/// The fixed CSV header of a trace file.
extern const char* const kTraceHeader;

void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const TraceRecord& rec);
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

/// Reads the columns of the CSV back; fields not in the file stay default.
/// Throws ConfigError (with the line number) on malformed input.
std::vector<TraceRecord> read_trace_csv(std::istream& in);
std::vector<TraceRecord> read_trace_file(const std::string& path);

/// Streams rows to a file as they arrive.
class CsvTraceSink final : public TraceSink {
 public:
  explicit CsvTraceSink(const std::string& path);
  void record(const TraceRecord& rec) override;

 private:
  std::ofstream out_;
};

}  // namespace bundlekit
