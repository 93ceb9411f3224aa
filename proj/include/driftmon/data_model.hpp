#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace driftmon {

// A cell is either missing, a number, or a category string.
using Value = std::variant<std::monostate, double, std::string>;

inline bool is_missing(const Value& v) { return std::holds_alternative<std::monostate>(v); }
inline bool is_number(const Value& v) { return std::holds_alternative<double>(v); }
inline bool is_text(const Value& v) { return std::holds_alternative<std::string>(v); }
inline double as_number(const Value& v) { return std::get<double>(v); }
inline const std::string& as_text(const Value& v) { return std::get<std::string>(v); }

enum class FeatureKind { Numeric, Categorical, Label };

struct FieldSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::string unit;  // optional tag for numeric fields
};

struct TimestampFields {
    std::string month = "Month";
    std::string day = "Day";
    std::string hour = "Hour";
};

// Ordered field list plus the names the pipeline needs to know about:
// the drift-target feature and the timestamp components.
class Schema {
public:
    Schema(std::vector<FieldSpec> fields,
           std::string drift_target = "Price_USD",
           TimestampFields timestamp = {});

    std::size_t size() const { return fields_.size(); }
    const std::vector<FieldSpec>& fields() const { return fields_; }
    const FieldSpec& field(std::size_t i) const { return fields_[i]; }

    std::optional<std::size_t> index_of(const std::string& name) const;
    // Throws std::invalid_argument when the field does not exist.
    std::size_t require_index(const std::string& name) const;
    bool has_field(const std::string& name) const { return index_of(name).has_value(); }

    std::size_t label_index() const { return label_index_; }
    const std::string& label_name() const { return fields_[label_index_].name; }
    const std::string& drift_target() const { return drift_target_; }
    const TimestampFields& timestamp_fields() const { return timestamp_; }

    // New schema with extra numeric fields appended before nothing in
    // particular; used by feature engineering.
    Schema with_numeric_fields(const std::vector<std::string>& names) const;

private:
    std::vector<FieldSpec> fields_;
    std::string drift_target_;
    TimestampFields timestamp_;
    std::size_t label_index_ = 0;
};

struct Record {
    std::vector<Value> values;                 // aligned to schema order
    std::optional<std::int64_t> timestamp;     // minutes since the dataset epoch
};

struct Batch {
    int index = 0;  // 1-based
    std::vector<Record> records;
};

struct Dataset {
    Schema schema;
    std::vector<Record> records;
};

struct Validity {
    bool ok = true;
    std::vector<std::string> violations;  // "arity", "type:<field>"
};

// Verdict, not failure: reports arity and per-field type mismatches.
Validity validate_record(const Schema& schema, const Record& record);

// Stable sort by timestamp. Throws DataError when a record has no timestamp.
Dataset sort_by_timestamp(const Dataset& dataset);

// Contiguous chronological slices; sizes differ by at most one, earlier
// batches take the remainder. Requires a timestamp-sorted dataset.
std::vector<Batch> partition_batches(const Dataset& dataset, std::size_t k);

}  // namespace driftmon
