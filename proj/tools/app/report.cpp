#include "sketch3d_app/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "sketch3d/error.hpp"
#include "sketch3d/text_util.hpp"
#include "sketch3d_app/manifest.hpp"

namespace sketch3d::app {

using nlohmann::json;

std::vector<CategoryAggregate> aggregate(const std::vector<ShapeRow>& rows) {
    std::map<std::string, std::vector<const ShapeRow*>> by_category;
    for (const ShapeRow& r : rows) by_category[r.category].push_back(&r);

    std::vector<CategoryAggregate> out;
    for (auto& [category, members] : by_category) {
        std::sort(members.begin(), members.end(),
                  [](const ShapeRow* a, const ShapeRow* b) { return a->shape_id < b->shape_id; });
        CategoryAggregate agg;
        agg.category = category;
        agg.count = members.size();
        double emd_sum = 0;
        std::size_t emd_count = 0;
        for (const ShapeRow* r : members) {
            agg.chamfer += r->report.chamfer;
            agg.precision += r->report.precision;
            agg.recall += r->report.recall;
            agg.fscore += r->report.fscore;
            if (r->report.emd) {
                emd_sum += *r->report.emd;
                ++emd_count;
            }
        }
        const auto n = static_cast<double>(agg.count);
        agg.chamfer /= n;
        agg.precision /= n;
        agg.recall /= n;
        agg.fscore /= n;
        if (emd_count > 0) agg.emd = emd_sum / static_cast<double>(emd_count);
        out.push_back(std::move(agg));
    }
    return out;
}

std::string metrics_csv(const std::vector<ShapeRow>& rows) {
    using detail::format_double;
    std::string out = "shape_id,viewpoint_id,chamfer,emd,precision,recall,fscore\n";
    for (const ShapeRow& r : rows) {
        out += r.shape_id + "," + std::to_string(r.viewpoint_id) + "," + format_double(r.report.chamfer) + "," +
               (r.report.emd ? format_double(*r.report.emd) : std::string()) + "," +
               format_double(r.report.precision) + "," + format_double(r.report.recall) + "," +
               format_double(r.report.fscore) + "\n";
    }
    return out;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json aggregate_json(const CategoryAggregate& a) {
    return {{"category", a.category}, {"count", a.count},         {"chamfer", a.chamfer},
            {"emd", optional_number(a.emd)}, {"precision", a.precision}, {"recall", a.recall},
            {"fscore", a.fscore}};
}

double number_field(const json& obj, const char* key) {
    if (!obj.contains(key) || !obj[key].is_number()) throw ParseError(std::string("missing numeric field '") + key + "'");
    return obj[key].get<double>();
}

}  // namespace

json metrics_json(const EvalSettings& settings, const std::vector<ShapeRow>& rows, const std::vector<Failure>& failures) {
    json records = json::array();
    for (const ShapeRow& r : rows) {
        records.push_back({{"shape_id", r.shape_id},
                           {"viewpoint_id", r.viewpoint_id},
                           {"category", r.category},
                           {"chamfer", r.report.chamfer},
                           {"emd", optional_number(r.report.emd)},
                           {"precision", r.report.precision},
                           {"recall", r.report.recall},
                           {"fscore", r.report.fscore},
                           {"threshold", r.report.threshold}});
    }
    json aggregates = json::array();
    for (const CategoryAggregate& a : aggregate(rows)) aggregates.push_back(aggregate_json(a));
    json fails = json::array();
    for (const Failure& f : failures) fails.push_back({{"shape_id", f.shape_id}, {"error", f.error}});
    return {{"schema_version", kSchemaVersion},
            {"seed", settings.seed},
            {"threshold", settings.threshold},
            {"reduce", std::string(to_string(settings.reduce))},
            {"align", std::string(to_string(settings.align))},
            {"records", std::move(records)},
            {"aggregates", std::move(aggregates)},
            {"failures", std::move(fails)}};
}

MetricTables parse_metrics_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("metrics file is not valid JSON: ") + e.what());
    }
    const json* records = nullptr;
    if (doc.is_array()) {
        records = &doc;
    } else if (doc.is_object() && doc.contains("records") && doc["records"].is_array()) {
        if (doc.contains("schema_version") && doc["schema_version"] != kSchemaVersion)
            throw ParseError("unsupported metrics schema_version " + doc["schema_version"].dump());
        records = &doc["records"];
    } else {
        throw ParseError("metrics JSON must be an array of records or an object with 'records'");
    }

    MetricTables tables;
    for (const json& r : *records) {
        if (!r.is_object() || !r.contains("shape_id") || !r["shape_id"].is_string())
            throw ParseError("metric record without a shape_id");
        ShapeRow row;
        row.shape_id = r["shape_id"].get<std::string>();
        row.category = r.value("category", std::string("uncategorized"));
        row.viewpoint_id = r.value("viewpoint_id", std::size_t{0});
        row.report.chamfer = number_field(r, "chamfer");
        row.report.precision = number_field(r, "precision");
        row.report.recall = number_field(r, "recall");
        row.report.fscore = number_field(r, "fscore");
        row.report.threshold = r.value("threshold", kDefaultFscoreThreshold);
        if (r.contains("emd") && r["emd"].is_number()) row.report.emd = r["emd"].get<double>();
        tables.rows.push_back(std::move(row));
    }
    tables.aggregates = aggregate(tables.rows);

    if (doc.is_object() && doc.contains("aggregates")) {
        const json& embedded = doc["aggregates"];
        if (!embedded.is_array() || embedded.size() != tables.aggregates.size())
            throw ParseError("embedded aggregates do not match the records' categories");
        constexpr double kTol = 1e-12;
        for (std::size_t i = 0; i < embedded.size(); ++i) {
            const CategoryAggregate& mine = tables.aggregates[i];
            const json& theirs = embedded[i];
            if (theirs.value("category", std::string()) != mine.category ||
                theirs.value("count", std::size_t{0}) != mine.count)
                throw ParseError("embedded aggregate " + std::to_string(i) + " does not match the records");
            auto check = [&](const char* key, double value) {
                if (std::abs(number_field(theirs, key) - value) > kTol)
                    throw ParseError(std::string("embedded aggregate '") + key + "' for " + mine.category +
                                     " differs from the recomputed mean");
            };
            check("chamfer", mine.chamfer);
            check("precision", mine.precision);
            check("recall", mine.recall);
            check("fscore", mine.fscore);
            if (mine.emd) check("emd", *mine.emd);
        }
    }
    return tables;
}

std::string format_table(const std::vector<CategoryAggregate>& aggregates) {
    const std::vector<std::string> header = {"category", "count", "chamfer", "emd", "precision", "recall", "fscore"};
    std::vector<std::vector<std::string>> cells{header};
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    for (const auto& a : aggregates) {
        cells.push_back({a.category, std::to_string(a.count), num(a.chamfer), a.emd ? num(*a.emd) : "-",
                         num(a.precision), num(a.recall), num(a.fscore)});
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& row : cells)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::string out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            // First column left-aligned, numbers right-aligned.
            const std::string pad(width[c] - row[c].size(), ' ');
            out += c == 0 ? row[c] + pad : pad + row[c];
            out += c + 1 < row.size() ? "  " : "\n";
        }
    }
    return out;
}

std::string format_gnuplot(const std::vector<CategoryAggregate>& aggregates) {
    using detail::format_double;
    std::string out = "# category count chamfer emd precision recall fscore\n";
    for (const auto& a : aggregates) {
        out += "\"" + a.category + "\" " + std::to_string(a.count) + " " + format_double(a.chamfer) + " " +
               (a.emd ? format_double(*a.emd) : std::string("NaN")) + " " + format_double(a.precision) + " " +
               format_double(a.recall) + " " + format_double(a.fscore) + "\n";
    }
    return out;
}

}  // namespace sketch3d::app
