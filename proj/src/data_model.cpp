#include "driftmon/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "driftmon/errors.hpp"

namespace driftmon {

Schema::Schema(std::vector<FieldSpec> fields, std::string drift_target, TimestampFields timestamp)
    : fields_(std::move(fields)), drift_target_(std::move(drift_target)),
      timestamp_(std::move(timestamp)) {
    if (fields_.empty()) {
        throw std::invalid_argument("schema: no fields");
    }
    std::set<std::string> seen;
    std::size_t labels = 0;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        const auto& f = fields_[i];
        if (f.name.empty()) {
            throw std::invalid_argument("schema: empty field name");
        }
        if (!seen.insert(f.name).second) {
            throw std::invalid_argument("schema: duplicate field name '" + f.name + "'");
        }
        if (f.kind == FeatureKind::Label) {
            ++labels;
            label_index_ = i;
        }
    }
    if (labels != 1) {
        throw std::invalid_argument("schema: exactly one label field required, got " +
                                    std::to_string(labels));
    }
    const auto target = index_of(drift_target_);
    if (!target) {
        throw std::invalid_argument("schema: drift target '" + drift_target_ + "' not found");
    }
    if (fields_[*target].kind != FeatureKind::Numeric) {
        throw std::invalid_argument("schema: drift target '" + drift_target_ + "' must be numeric");
    }
}

std::optional<std::size_t> Schema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (fields_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t Schema::require_index(const std::string& name) const {
    const auto idx = index_of(name);
    if (!idx) {
        throw std::invalid_argument("unknown feature '" + name + "'");
    }
    return *idx;
}

Schema Schema::with_numeric_fields(const std::vector<std::string>& names) const {
    auto fields = fields_;
    for (const auto& name : names) {
        fields.push_back({name, FeatureKind::Numeric, ""});
    }
    return Schema(fields, drift_target_, timestamp_);
}

Validity validate_record(const Schema& schema, const Record& record) {
    Validity v;
    if (record.values.size() != schema.size()) {
        v.ok = false;
        v.violations.push_back("arity");
        return v;
    }
    for (std::size_t i = 0; i < schema.size(); ++i) {
        const Value& value = record.values[i];
        if (is_missing(value)) continue;  // missingness is resolved in preprocessing
        switch (schema.field(i).kind) {
            case FeatureKind::Numeric:
                if (!is_number(value) || !std::isfinite(as_number(value))) {
                    v.ok = false;
                    v.violations.push_back("type:" + schema.field(i).name);
                }
                break;
            case FeatureKind::Categorical:
            case FeatureKind::Label:
                if (!is_text(value)) {
                    v.ok = false;
                    v.violations.push_back("type:" + schema.field(i).name);
                }
                break;
        }
    }
    return v;
}

Dataset sort_by_timestamp(const Dataset& dataset) {
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        if (!dataset.records[i].timestamp) {
            throw DataError("sort_by_timestamp: record " + std::to_string(i) +
                            " has no timestamp; run preprocessing first");
        }
    }
    Dataset out = dataset;
    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const Record& a, const Record& b) { return *a.timestamp < *b.timestamp; });
    return out;
}

std::vector<Batch> partition_batches(const Dataset& dataset, std::size_t k) {
    const std::size_t n = dataset.records.size();
    if (k == 0) {
        throw std::invalid_argument("partition_batches: k must be positive");
    }
    if (k > n) {
        throw std::invalid_argument("partition_batches: k=" + std::to_string(k) +
                                    " exceeds record count " + std::to_string(n));
    }
    for (std::size_t i = 1; i < n; ++i) {
        const auto& prev = dataset.records[i - 1].timestamp;
        const auto& cur = dataset.records[i].timestamp;
        if (!prev || !cur || *prev > *cur) {
            throw std::invalid_argument("partition_batches: dataset not sorted by timestamp");
        }
    }

    const std::size_t base = n / k;
    const std::size_t remainder = n % k;  // earliest batches take the extra record
    std::vector<Batch> batches;
    batches.reserve(k);
    std::size_t offset = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t size = base + (i < remainder ? 1 : 0);
        Batch b;
        b.index = static_cast<int>(i + 1);
        b.records.assign(dataset.records.begin() + offset, dataset.records.begin() + offset + size);
        offset += size;
        batches.push_back(std::move(b));
    }
    return batches;
}

}  // namespace driftmon
