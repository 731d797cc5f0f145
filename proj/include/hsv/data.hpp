#pragma once

#include <string>
#include <vector>

namespace hsv {

// Daily observables fed to the estimation side: annualized open-to-close
// return, log bipower variation, extracted price-jump indicator and size.
// zp is stored as 0 on no-jump days and never enters likelihood terms there.
struct ObservedData {
    std::vector<std::string> dates;
    std::vector<double> r;
    std::vector<double> lnbv;
    std::vector<int> dnp;
    std::vector<double> zp;

    std::size_t size() const { return r.size(); }
    void validate() const;  // equal lengths, finite values, dnp in {0,1}
};

ObservedData read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const ObservedData& data);

// Latent truth emitted by the simulator for recovery tests.
struct LatentTruth {
    std::vector<std::string> dates;
    std::vector<double> v;
    std::vector<int> dnv;
    std::vector<double> zv;
    std::vector<double> delta_p;
    std::vector<double> delta_v;
};

void write_truth_csv(const std::string& path, const LatentTruth& truth);
LatentTruth read_truth_csv(const std::string& path);

}  // namespace hsv
