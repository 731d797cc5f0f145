#include "hsv/data.hpp"

#include <cmath>

#include "hsv/common.hpp"
#include "hsv/csv.hpp"

namespace hsv {

void ObservedData::validate() const {
    const std::size_t n = r.size();
    if (n == 0) throw InputError("dataset is empty");
    if (dates.size() != n || lnbv.size() != n || dnp.size() != n || zp.size() != n)
        throw InputError("dataset columns have unequal lengths");
    for (std::size_t t = 0; t < n; ++t) {
        if (!std::isfinite(r[t]) || !std::isfinite(lnbv[t]))
            throw InputError("non-finite observation at row " + std::to_string(t));
        if (dnp[t] != 0 && dnp[t] != 1)
            throw InputError("dnp not in {0,1} at row " + std::to_string(t));
        if (dnp[t] == 1 && !std::isfinite(zp[t]))
            throw InputError("jump day with non-finite zp at row " + std::to_string(t));
    }
}

ObservedData read_dataset_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const int cd = t.column("date"), cr = t.column("r"), cb = t.column("lnbv"),
              cn = t.column("dnp"), cz = t.column("zp");
    if (cd < 0 || cr < 0 || cb < 0 || cn < 0 || cz < 0)
        throw InputError(path + ": expected header date,r,lnbv,dnp,zp");
    ObservedData d;
    for (const auto& row : t.rows) {
        d.dates.push_back(row[cd]);
        d.r.push_back(parse_double(row[cr]));
        d.lnbv.push_back(parse_double(row[cb]));
        const int jump = static_cast<int>(parse_double(row[cn]));
        d.dnp.push_back(jump);
        d.zp.push_back(jump == 1 ? parse_double(row[cz]) : 0.0);
    }
    d.validate();
    return d;
}

void write_dataset_csv(const std::string& path, const ObservedData& data) {
    CsvTable t;
    t.header = {"date", "r", "lnbv", "dnp", "zp"};
    for (std::size_t i = 0; i < data.size(); ++i) {
        t.rows.push_back({data.dates[i], format_double(data.r[i]), format_double(data.lnbv[i]),
                          std::to_string(data.dnp[i]),
                          data.dnp[i] == 1 ? format_double(data.zp[i]) : std::string{}});
    }
    write_csv(path, t);
}

void write_truth_csv(const std::string& path, const LatentTruth& truth) {
    CsvTable t;
    t.header = {"date", "V", "dnv", "zv", "delta_p", "delta_v"};
    for (std::size_t i = 0; i < truth.v.size(); ++i) {
        t.rows.push_back({truth.dates[i], format_double(truth.v[i]), std::to_string(truth.dnv[i]),
                          format_double(truth.zv[i]), format_double(truth.delta_p[i]),
                          format_double(truth.delta_v[i])});
    }
    write_csv(path, t);
}

LatentTruth read_truth_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    LatentTruth out;
    const int cd = t.column("date"), cv = t.column("V"), cn = t.column("dnv"),
              cz = t.column("zv"), cp = t.column("delta_p"), cq = t.column("delta_v");
    if (cd < 0 || cv < 0 || cn < 0 || cz < 0 || cp < 0 || cq < 0)
        throw InputError(path + ": expected header date,V,dnv,zv,delta_p,delta_v");
    for (const auto& row : t.rows) {
        out.dates.push_back(row[cd]);
        out.v.push_back(parse_double(row[cv]));
        out.dnv.push_back(static_cast<int>(parse_double(row[cn])));
        out.zv.push_back(parse_double(row[cz]));
        out.delta_p.push_back(parse_double(row[cp]));
        out.delta_v.push_back(parse_double(row[cq]));
    }
    return out;
}

}  // namespace hsv
