#pragma once

#include <string>
#include <vector>

#include "zslnorm/czsl.hpp"
#include "zslnorm/variance_lab.hpp"
#include "zslnorm/zsl.hpp"

namespace zslnorm {

std::string to_json(const EvalReport& report);
std::string to_csv(const EvalReport& report);  // header + one row

std::string to_json(const std::vector<VarianceReport>& reports);
/// Columns: setting, d, gamma, predicted, empirical, stderr, trials.
std::string to_csv(const std::vector<VarianceReport>& reports);

std::string to_json(const std::vector<ScalePoint>& points, double ausuc_value);
std::string to_csv(const std::vector<ScalePoint>& points);

std::string to_json(const AccuracyMatrix& acc, const CzslMetrics& metrics, double forgetting_value);
/// Long format: timestep, metric, value.
std::string to_csv(const AccuracyMatrix& acc);

std::string to_json(const AttributeDiagnostics& diagnostics);

/// One JSON object per line: {"epoch": ..., "loss": ...}.
std::string to_jsonl(const TrainLog& log);

std::string to_json(const ProbeTrace& trace);

}  // namespace zslnorm
