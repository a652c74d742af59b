#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "casecost/types.hpp"

namespace casecost {

/// The three joined input tables: patient-level cases, hospital cost
/// parameters and the per-CMG actual-cost benchmark. Immutable after
/// construction; every CMG appearing in cases appears in the benchmark and
/// vice versa, with matching case counts.
struct Dataset {
    std::vector<CaseRecord> cases;
    HospitalCostParams params;
    std::map<std::string, CmgStats> benchmark;
    std::map<std::string, std::vector<std::size_t>> groups;  // cmg -> indices into cases
};

/// Builds a Dataset from parts: validates every record, the parameters and
/// the cross-table invariants, and derives the per-CMG group index.
/// Error-severity violations throw std::runtime_error; warnings are
/// appended to *warnings when given.
Dataset make_dataset(std::vector<CaseRecord> cases, HospitalCostParams params,
                     std::map<std::string, CmgStats> benchmark, std::vector<Violation>* warnings = nullptr);

Dataset load_dataset(const std::filesystem::path& cases_path, const std::filesystem::path& params_path,
                     const std::filesystem::path& benchmark_path, std::vector<Violation>* warnings = nullptr);

/// Convenience form expecting cases.csv, params.csv and benchmark.csv in dir.
Dataset load_dataset_dir(const std::filesystem::path& dir, std::vector<Violation>* warnings = nullptr);

/// Writes cases.csv, params.csv and benchmark.csv into dir. Monetary fields
/// are rounded to cents; all other numerics use shortest round-trip form.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

}  // namespace casecost
