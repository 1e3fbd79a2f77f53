import pytest

HEADER = ("alpha,beta,n_males,n_females,rep,mean_male_energy,mean_female_energy,"
          "std_male_energy,std_female_energy,single_males,single_females,"
          "blocking_pairs,proposal_events,child_seed")


def format_row(alpha, beta, n_males, n_females, rep, male, female):
    return (f"{alpha:.6f},{beta:.6f},{n_males},{n_females},{rep},"
            f"{male:.6f},{female:.6f},1.000000,1.000000,0,0,0,100,12345")


@pytest.fixture
def make_csv(tmp_path):
    """Write a sweep-schema CSV: rows are (alpha, beta, m, rep, male, female)."""
    counter = {"n": 0}

    def _make(rows, name=None):
        counter["n"] += 1
        path = tmp_path / (name or f"sweep{counter['n']}.csv")
        lines = [HEADER]
        for alpha, beta, m, rep, male, female in rows:
            lines.append(format_row(alpha, beta, 100, m, rep, male, female))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _make


@pytest.fixture
def four_config_csv(make_csv):
    rows = []
    for alpha, beta in ((1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.5)):
        for m in (50, 100, 150):
            for rep in range(3):
                rows.append((alpha, beta, m, rep,
                             5.0 + m / 50 + rep * 0.1, 20.0 - m / 50 + rep * 0.1))
    return make_csv(rows, name="extremes.csv")
