#include "zslnorm/serialize.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace zslnorm {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

Json eval_report_json(const EvalReport& report) {
  Json j;
  j["gzsl_u"] = report.gzsl_u;
  j["gzsl_s"] = report.gzsl_s;
  j["gzsl_h"] = report.gzsl_h;
  j["ausuc"] = report.ausuc;
  j["seen_scale_used"] = report.seen_scale_used;
  Json per_class = Json::object();
  for (const auto& [c, acc] : report.per_class_accuracy) {
    per_class[std::to_string(c)] = acc;
  }
  j["per_class_accuracy"] = per_class;
  return j;
}

}  // namespace

std::string to_json(const EvalReport& report) { return eval_report_json(report).dump(2) + "\n"; }

std::string to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "gzsl_u,gzsl_s,gzsl_h,ausuc,seen_scale_used\n";
  out << fmt(report.gzsl_u) << ',' << fmt(report.gzsl_s) << ',' << fmt(report.gzsl_h) << ','
      << fmt(report.ausuc) << ',' << fmt(report.seen_scale_used) << '\n';
  return out.str();
}

std::string to_json(const std::vector<VarianceReport>& reports) {
  Json arr = Json::array();
  for (const VarianceReport& r : reports) {
    Json j;
    j["setting"] = r.setting;
    j["d"] = r.d;
    j["gamma"] = r.gamma;
    j["predicted"] = r.predicted;
    j["empirical"] = r.empirical;
    j["stderr"] = r.stderr_of_empirical;
    j["trials"] = r.trials;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string to_csv(const std::vector<VarianceReport>& reports) {
  std::ostringstream out;
  out << "setting,d,gamma,predicted,empirical,stderr,trials\n";
  for (const VarianceReport& r : reports) {
    out << r.setting << ',' << r.d << ',' << fmt(r.gamma) << ',' << fmt(r.predicted) << ','
        << fmt(r.empirical) << ',' << fmt(r.stderr_of_empirical) << ',' << r.trials << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<ScalePoint>& points, double ausuc_value) {
  Json j;
  Json arr = Json::array();
  for (const ScalePoint& p : points) {
    Json row;
    row["scale"] = p.scale;
    row["gzsl_u"] = p.gzsl_u;
    row["gzsl_s"] = p.gzsl_s;
    row["gzsl_h"] = p.gzsl_h;
    arr.push_back(row);
  }
  j["points"] = arr;
  j["ausuc"] = ausuc_value;
  return j.dump(2) + "\n";
}

std::string to_csv(const std::vector<ScalePoint>& points) {
  std::ostringstream out;
  out << "scale,gzsl_u,gzsl_s,gzsl_h\n";
  for (const ScalePoint& p : points) {
    out << fmt(p.scale) << ',' << fmt(p.gzsl_u) << ',' << fmt(p.gzsl_s) << ',' << fmt(p.gzsl_h)
        << '\n';
  }
  return out.str();
}

std::string to_json(const AccuracyMatrix& acc, const CzslMetrics& metrics,
                    double forgetting_value) {
  Json j;
  Json steps = Json::array();
  for (std::size_t t = 0; t < acc.timesteps.size(); ++t) {
    const TimestepRecord& r = acc.timesteps[t];
    Json row;
    row["timestep"] = t + 1;
    row["gzsl_s"] = r.gzsl_s;
    row["gzsl_u"] = r.gzsl_u ? Json(*r.gzsl_u) : Json(nullptr);
    row["gzsl_h"] = r.gzsl_h ? Json(*r.gzsl_h) : Json(nullptr);
    row["ausuc"] = r.ausuc ? Json(*r.ausuc) : Json(nullptr);
    row["joint_accuracy"] = r.joint_accuracy;
    row["per_task_accuracy"] = r.per_task_accuracy;
    steps.push_back(row);
  }
  j["timesteps"] = steps;
  Json m;
  m["msa"] = metrics.msa;
  m["mua"] = metrics.mua ? Json(*metrics.mua) : Json(nullptr);
  m["mh"] = metrics.mh ? Json(*metrics.mh) : Json(nullptr);
  m["mauc"] = metrics.mauc ? Json(*metrics.mauc) : Json(nullptr);
  m["mja"] = metrics.mja;
  m["forgetting"] = forgetting_value;
  // The forgetting formula follows Chaudhry et al.: mean over non-final
  // tasks of (best historical accuracy - final accuracy).
  m["forgetting_definition"] = "chaudhry_gem";
  j["metrics"] = m;
  return j.dump(2) + "\n";
}

std::string to_csv(const AccuracyMatrix& acc) {
  std::ostringstream out;
  out << "timestep,metric,value\n";
  for (std::size_t t = 0; t < acc.timesteps.size(); ++t) {
    const TimestepRecord& r = acc.timesteps[t];
    out << t + 1 << ",gzsl_s," << fmt(r.gzsl_s) << '\n';
    if (r.gzsl_u) out << t + 1 << ",gzsl_u," << fmt(*r.gzsl_u) << '\n';
    if (r.gzsl_h) out << t + 1 << ",gzsl_h," << fmt(*r.gzsl_h) << '\n';
    if (r.ausuc) out << t + 1 << ",ausuc," << fmt(*r.ausuc) << '\n';
    out << t + 1 << ",joint_accuracy," << fmt(r.joint_accuracy) << '\n';
  }
  return out.str();
}

std::string to_json(const AttributeDiagnostics& diagnostics) {
  Json j;
  Json dims = Json::array();
  for (const auto& r : diagnostics.per_dimension) {
    if (r) {
      Json row;
      row["k2"] = r->k2;
      row["p_value"] = r->p_value;
      dims.push_back(row);
    } else {
      dims.push_back(nullptr);
    }
  }
  j["per_dimension_normality"] = dims;
  j["median_normality_p"] = diagnostics.median_normality_p;
  j["mean_abs_correlation"] = diagnostics.correlation.mean_abs_corr;
  j["excluded_columns"] = diagnostics.correlation.excluded_columns;
  j["median_abs_correlation"] = diagnostics.median_abs_corr;
  Json norm;
  norm["mean"] = diagnostics.sq_norm_summary.mean;
  norm["variance"] = diagnostics.sq_norm_summary.variance;
  norm["skewness"] = diagnostics.sq_norm_summary.skewness;
  norm["excess_kurtosis"] = diagnostics.sq_norm_summary.excess_kurtosis;
  norm["n"] = diagnostics.sq_norm_summary.n;
  norm["degenerate"] = diagnostics.sq_norm_summary.degenerate;
  norm["deciles"] = diagnostics.sq_norm_deciles;
  j["squared_norms"] = norm;
  return j.dump(2) + "\n";
}

std::string to_jsonl(const TrainLog& log) {
  std::ostringstream out;
  for (const EpochLog& e : log.epochs) {
    Json j;
    j["epoch"] = e.epoch;
    j["loss"] = e.mean_loss;
    out << j.dump() << '\n';
  }
  return out.str();
}

std::string to_json(const ProbeTrace& trace) {
  Json j;
  j["iterations"] = trace.iterations;
  j["values"] = trace.values;
  return j.dump(2) + "\n";
}

}  // namespace zslnorm
