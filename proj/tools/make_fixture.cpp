// make_fixture: writes a synthetic ledger in the Online Retail CSV layout.
//
//   make_fixture [--rows N] [--seed S] [--customers C] > retail_fixture.csv
//
// Customers come from three behaviour groups (frequent high spenders,
// regulars, lapsed) so the clusterers have structure to find. The file also
// carries what the cleaner has to deal with: lines without a customer id,
// cancellation invoices with negative quantities, exact duplicate lines, and
// descriptions that need CSV quoting.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "rfmseg/dataio.hpp"
#include "rfmseg/random.hpp"

namespace {

struct Product {
    const char* code;
    const char* description;
    std::int64_t price_micros;
};

const Product kCatalogue[] = {
    {"85123A", "WHITE HANGING HEART T-LIGHT HOLDER", 2'550'000},
    {"71053", "WHITE METAL LANTERN", 3'390'000},
    {"84406B", "CREAM CUPID HEARTS COAT HANGER", 2'750'000},
    {"84029G", "KNITTED UNION FLAG HOT WATER BOTTLE", 3'390'000},
    {"22752", "SET 7 BABUSHKA NESTING BOXES", 7'650'000},
    {"21730", "GLASS STAR FROSTED T-LIGHT HOLDER", 4'250'000},
    {"22633", "HAND WARMER UNION JACK", 1'850'000},
    {"84879", "ASSORTED COLOUR BIRD ORNAMENT", 1'690'000},
    {"22745", "POPPY'S PLAYHOUSE BEDROOM", 2'100'000},
    {"22310", "IVORY KNITTED MUG COSY", 1'650'000},
    {"21754", "HOME BUILDING BLOCK WORD", 5'950'000},
    {"22960", "JAM MAKING SET WITH JARS", 4'250'000},
    {"22913", "RED COAT RACK PARIS FASHION", 4'950'000},
    {"21791", "VINTAGE HEADS AND TAILS CARD GAME", 1'250'000},
    {"35004C", "SET OF 3 COLOURED  FLYING DUCKS", 5'450'000},
    {"22423", "REGENCY CAKESTAND 3 TIER", 12'750'000},
    {"47566", "PARTY BUNTING", 4'950'000},
    {"85099B", "JUMBO BAG RED RETROSPOT", 2'080'000},
    {"20725", "LUNCH BAG RED RETROSPOT", 1'650'000},
    {"21212", "PACK OF 72 RETROSPOT CAKE CASES", 550'000},
    {"22197", "SMALL POPCORN HOLDER", 850'000},
    {"84991", "60 TEATIME FAIRY CAKE CASES", 550'000},
    {"23084", "RABBIT NIGHT LIGHT", 2'080'000},
    {"22086", "PAPER CHAIN KIT 50'S CHRISTMAS", 2'950'000},
    {"16008", "SMALL FOLDING SCISSOR(POINTED EDGE)", 250'000},
    {"21175", "GIN + TONIC DIET METAL SIGN", 2'550'000},
    {"79321", "CHILLI LIGHTS", 5'750'000},
    {"22469", "HEART OF WICKER SMALL", 1'650'000},
    {"23166", "MEDIUM CERAMIC TOP STORAGE JAR", 1'250'000},
    {"22616", "PACK OF 12 LONDON TISSUES", 290'000},
    {"21977", "PACK OF 60 PINK PAISLEY CAKE CASES", 550'000},
    {"POST", "POSTAGE", 18'000'000},
    {"22502", "PICNIC BASKET WICKER, SMALL", 5'950'000},
    {"22139", "RETROSPOT TEA SET CERAMIC 11 PC", 4'950'000},
    {"21080", "SET/20 RED RETROSPOT PAPER NAPKINS", 850'000},
    {"22630", "DOLLY GIRL LUNCH BOX", 1'950'000},
    {"72741", "GRAND CHOCOLATECANDLE", 1'450'000},
    {"22355", "CHARLOTTE BAG \"SUKI\" DESIGN", 850'000},
    {"21985", "PACK OF 12 HEARTS DESIGN TISSUES", 290'000},
    {"16216", "LETTER SHAPE PENCIL SHARPENER", 165'000},
};
constexpr std::size_t kProducts = sizeof(kCatalogue) / sizeof(kCatalogue[0]);

const char* const kCountries[] = {"United Kingdom", "United Kingdom", "United Kingdom", "United Kingdom",
                                  "Germany",        "France",         "EIRE",           "Netherlands"};

enum class Group { Frequent, Regular, Lapsed };

struct Customer {
    std::string id;
    Group group;
    const char* country;
};

struct Invoice {
    std::int64_t minute;
    int customer;  // -1: no customer id recorded
};

}  // namespace

int main(int argc, char** argv) {
    std::size_t rows = 1000;
    std::uint64_t seed = 20111209;
    std::size_t n_customers = 0;
    CLI::App app{"Synthetic ledger in the Online Retail CSV layout"};
    app.add_option("--rows", rows, "ledger lines to write")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--customers", n_customers, "distinct customers (default rows / 7)");
    CLI11_PARSE(app, argc, argv);
    rfmseg::Rng rng(seed);

    const auto start = rfmseg::Timestamp::from_civil(2010, 12, 1, 8, 0).minutes();
    const auto end = rfmseg::Timestamp::from_civil(2011, 12, 9, 12, 50).minutes();
    const auto span = end - start;

    std::vector<Customer> customers;
    if (n_customers == 0) n_customers = rows / 7;
    n_customers = std::max<std::size_t>(12, n_customers);
    for (std::size_t i = 0; i < n_customers; ++i) {
        const double u = rng.uniform();
        const Group g = u < 0.2 ? Group::Frequent : (u < 0.6 ? Group::Regular : Group::Lapsed);
        customers.push_back({std::to_string(12346 + 2 * i), g, kCountries[rng.index(std::size(kCountries))]});
    }

    // Trading hours 8:00-17:59 on a day drawn from [from, to] of the year.
    const auto draw_time = [&](double from, double to) {
        const double t = from + (to - from) * rng.uniform();
        const std::int64_t day = (start + static_cast<std::int64_t>(t * static_cast<double>(span))) / 1440;
        return day * 1440 + 480 + static_cast<std::int64_t>(rng.index(600));
    };

    std::vector<Invoice> invoices;
    for (std::size_t c = 0; c < customers.size(); ++c) {
        std::size_t count = 1;
        double from = 0.0, to = 1.0;
        switch (customers[c].group) {
            case Group::Frequent: count = 4 + rng.index(5); break;
            case Group::Regular: count = 1 + rng.index(3); from = 0.3; break;
            case Group::Lapsed: count = 1 + rng.index(2); to = 0.35; break;
        }
        for (std::size_t k = 0; k < count; ++k) {
            invoices.push_back({draw_time(from, to), static_cast<int>(c)});
        }
    }
    const std::size_t guests = invoices.size() / 8 + 1;
    for (std::size_t k = 0; k < guests; ++k)
        invoices.push_back({draw_time(0.0, 1.0), -1});
    rng.shuffle(invoices.begin(), invoices.end());

    // Fill invoices in random order until the row budget is spent, then lay
    // them out chronologically with ascending invoice numbers.
    struct Filled {
        Invoice invoice;
        bool cancelled;
        std::vector<rfmseg::TransactionRecord> lines;
    };
    std::vector<Filled> filled;
    std::size_t total = 0;
    for (std::size_t inv = 0; total < rows; ++inv) {
        const Invoice& iv = invoices[inv % invoices.size()];
        const Customer* cust = iv.customer >= 0 ? &customers[static_cast<std::size_t>(iv.customer)] : nullptr;
        const Group g = cust ? cust->group : Group::Regular;
        const std::size_t lines = g == Group::Frequent ? 3 + rng.index(8) : 1 + rng.index(5);
        Filled grp{iv, cust && rng.uniform() < 0.05, {}};
        for (std::size_t l = 0; l < lines && total < rows; ++l) {
            const Product& p = kCatalogue[rng.index(kProducts)];
            std::int64_t qty = 1 + static_cast<std::int64_t>(rng.index(g == Group::Frequent ? 48 : 12));
            if (grp.cancelled) qty = -qty;
            rfmseg::TransactionRecord r;
            r.stock_code = p.code;
            r.description = std::string(p.description);
            r.quantity = qty;
            r.invoice_date = rfmseg::Timestamp::from_minutes(iv.minute);
            r.unit_price = rfmseg::Money::from_micros(p.price_micros);
            if (cust) r.customer_id = cust->id;
            r.country = cust ? cust->country : "United Kingdom";
            grp.lines.push_back(r);
            ++total;
            if (total < rows && rng.uniform() < 0.02) {  // exact duplicate line
                grp.lines.push_back(r);
                ++total;
            }
        }
        filled.push_back(std::move(grp));
    }
    std::stable_sort(filled.begin(), filled.end(),
                     [](const Filled& a, const Filled& b) { return a.invoice.minute < b.invoice.minute; });

    std::vector<rfmseg::TransactionRecord> out;
    std::int64_t invoice_no = 536365;
    for (auto& grp : filled) {
        const std::string number = (grp.cancelled ? "C" : "") + std::to_string(invoice_no++);
        for (auto& r : grp.lines) {
            r.invoice_no = number;
            out.push_back(std::move(r));
        }
    }

    rfmseg::write_transactions(std::cout, out);
    return 0;
}
