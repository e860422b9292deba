#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "hawkscan/detector.hpp"
#include "hawkscan/model.hpp"

namespace hawkscan {

// Model files are JSON objects:
//
//   {
//     "d": 2,
//     "mu": [0.5, 0.7],
//     "a": [[0.0, 0.3], [0.2, 0.0]],
//     "kernel": {"family": "exponential", "beta": 1.0, "truncation": null}
//   }
//
// A tabulated kernel is {"family": "tabulated", "grid": [...],
// "values": [...], "truncation": ...}. Instead of "kernel", a model may give
// "edge_kernels": a row-major array of D * D kernel objects (entry i * D + j
// is the kernel on the edge j -> i). Unknown keys are rejected.
HawkesModel parse_model(const std::string& json_text);
HawkesModel load_model(const std::string& path);
std::string model_to_json(const HawkesModel& model);
void save_model(const HawkesModel& model, const std::string& path);

// Events CSV with header `t,u`. Exact ties are moved 1e-9 after the
// previous event and reported in `warnings`; decreasing times and malformed
// rows raise std::runtime_error naming the line. The horizon is set to the
// last event time (0 for an empty file).
EventStream parse_events(const std::string& path,
                         std::vector<std::string>* warnings = nullptr);
EventStream parse_events_text(const std::string& text,
                              std::vector<std::string>* warnings = nullptr);
void write_events(const EventStream& stream, const std::string& path);
std::string events_to_csv(const EventStream& stream);

// Plain numeric matrix CSV without a header.
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

// Trajectory CSV with columns t,S,tau_hat.
void write_trajectory(const DetectionOutcome& outcome, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hawkscan
