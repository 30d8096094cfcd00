#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace firmcomp {

/// Homogeneous consumers: quality-assessment ability and the maximal affordable price.
struct ConsumerPopulation {
    double alpha = 1.0;
    double p_max = 1.0;

    ConsumerPopulation() = default;
    ConsumerPopulation(double alpha_, double p_max_) : alpha{alpha_}, p_max{p_max_} { validate(); }

    void validate() const {
        if (!(alpha >= 0)) throw std::domain_error("ConsumerPopulation: alpha must be >= 0");
        if (!(p_max > 0)) throw std::domain_error("ConsumerPopulation: p_max must be > 0");
    }
};

/// One product on the market.
struct Offer {
    double quality = 0.0;
    double price = 1.0;

    Offer() = default;
    Offer(double quality_, double price_) : quality{quality_}, price{price_} { validate(); }

    void validate() const {
        if (!(quality >= 0)) throw std::domain_error("Offer: quality must be >= 0");
        if (!(price > 0)) throw std::domain_error("Offer: price must be > 0");
    }

    friend bool operator==(const Offer&, const Offer&) = default;
};

struct Firm {
    Offer offer;
    double size_weight = 1.0;  ///< visibility weight, relative to the market total
    double efficiency = 1.0;   ///< production cost per unit quality

    Firm() = default;
    explicit Firm(Offer offer_, double size_weight_ = 1.0, double efficiency_ = 1.0)
        : offer{offer_}, size_weight{size_weight_}, efficiency{efficiency_} {
        validate();
    }

    void validate() const {
        offer.validate();
        if (!(size_weight > 0)) throw std::domain_error("Firm: size_weight must be > 0");
        if (!(efficiency > 0)) throw std::domain_error("Firm: efficiency must be > 0");
    }
};

struct Market {
    std::vector<Firm> firms;
    ConsumerPopulation population;

    Market() = default;
    Market(std::vector<Firm> firms_, ConsumerPopulation population_)
        : firms{std::move(firms_)}, population{population_} {
        validate();
    }

    std::size_t size() const { return firms.size(); }

    double total_weight() const {
        double s = 0;
        for (const auto& f : firms) s += f.size_weight;
        return s;
    }

    void validate() const {
        if (firms.empty()) throw std::domain_error("Market: at least one firm is required");
        population.validate();
        for (const auto& f : firms) f.validate();
    }
};

/// Raised when no firm on the market has a positive selection weight.
class AllWeightsZero : public std::runtime_error {
public:
    AllWeightsZero() : std::runtime_error("all selection weights are zero: no product is selectable") {}
};

}  // namespace firmcomp
