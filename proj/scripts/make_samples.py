#!/usr/bin/env python3
"""Regenerate the checked-in 100-row dataset samples.

The samples are synthetic stand-ins shaped like the three public datasets
(same columns, same category vocabularies, plausible value ranges) so the
test suite runs offline. scripts/fetch_*.sh download the real files into
the same layout when network access is available.
"""
import csv
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"
ROWS = 100


def write_csv(name, header, rows):
    path = OUT / name
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def fmt(x):
    return f"{x:.4f}"


def make_banknote(rng):
    """Two clearly separated classes driven by variance and skewness;
    curtosis and entropy are uninformative noise."""
    rows = []
    for i in range(ROWS):
        cls = i % 2
        if cls == 0:
            variance = rng.normal(2.4, 1.2)
            skewness = rng.normal(5.0, 2.8)
        else:
            variance = rng.normal(-2.4, 1.2)
            skewness = rng.normal(-1.5, 3.0)
        curtosis = rng.normal(2.0, 3.5)
        entropy = rng.normal(-1.2, 1.8)
        rows.append([fmt(variance), fmt(skewness), fmt(curtosis),
                     fmt(entropy), cls])
    write_csv("banknote_sample.csv",
              ["variance", "skewness", "curtosis", "entropy", "class"], rows)


def make_heart(rng):
    """Statlog-heart-shaped table; label follows a noisy linear score."""
    chest_pain = ["typical_angina", "atypical_angina", "non_anginal",
                  "asymptomatic"]
    slope = ["upsloping", "flat", "downsloping"]
    thal = ["normal", "fixed_defect", "reversible_defect"]
    rows = []
    for _ in range(ROWS):
        age = int(rng.integers(29, 78))
        sex = int(rng.integers(0, 2))
        cp = int(rng.integers(0, 4))
        trestbps = int(rng.integers(94, 201))
        chol = int(rng.integers(126, 565))
        fbs = int(rng.random() < 0.15)
        restecg = int(rng.integers(0, 3))
        thalach = int(rng.integers(71, 203))
        exang = int(rng.random() < 0.33)
        oldpeak = round(float(rng.random() * 4.4), 1)
        sl = int(rng.integers(0, 3))
        ca = int(rng.integers(0, 4))
        th = int(rng.integers(0, 3))
        score = (0.03 * (age - 54) + 0.8 * (cp == 3) + 0.9 * exang
                 + 0.5 * oldpeak - 0.015 * (thalach - 150) + 0.6 * (th == 2)
                 + 0.5 * ca + 0.4 * sex - 1.6)
        label = int(score + rng.normal(0.0, 0.6) > 0)
        rows.append([age, sex, chest_pain[cp], trestbps, chol, fbs, restecg,
                     thalach, exang, oldpeak, slope[sl], ca, thal[th], label])
    write_csv("heart_sample.csv",
              ["age", "sex", "chest_pain", "resting_bp", "cholesterol",
               "fasting_blood_sugar", "resting_ecg", "max_heart_rate",
               "exercise_angina", "oldpeak", "slope", "major_vessels",
               "thal", "disease"], rows)


def make_adult(rng):
    """Census-income-shaped table. native_country carries deliberate signal:
    Jamaica rows are always >50K, Mexico rows are always <=50K, so trees
    split on those indicator columns."""
    marital = ["Married-civ-spouse", "Divorced", "Never-married", "Separated",
               "Widowed", "Married-spouse-absent", "Married-AF-spouse"]
    occupation = ["Tech-support", "Craft-repair", "Other-service", "Sales",
                  "Exec-managerial", "Prof-specialty", "Handlers-cleaners",
                  "Machine-op-inspct", "Adm-clerical", "Farming-fishing",
                  "Transport-moving", "Priv-house-serv", "Protective-serv",
                  "Armed-Forces"]
    sex = ["Female", "Male"]
    countries = ["United-States", "Cambodia", "England", "Puerto-Rico",
                 "Canada", "Germany", "Outlying-US(Guam-USVI-etc)", "India",
                 "Japan", "Greece", "South", "China", "Cuba", "Iran",
                 "Honduras", "Philippines", "Italy", "Poland", "Jamaica",
                 "Vietnam", "Mexico", "Portugal", "Ireland", "France",
                 "Dominican-Republic", "Laos", "Ecuador", "Taiwan", "Haiti",
                 "Columbia", "Hungary", "Guatemala", "Nicaragua", "Scotland",
                 "Thailand", "Yugoslavia", "El-Salvador",
                 "Trinadad&Tobago", "Peru", "Hong", "Holand-Netherlands"]
    # 60 US rows, 10 Jamaica, 10 Mexico, the rest a handful of others.
    country_plan = (["United-States"] * 60 + ["Jamaica"] * 10
                    + ["Mexico"] * 10 + ["India"] * 4 + ["Philippines"] * 4
                    + ["Germany"] * 3 + ["Canada"] * 3 + ["Cuba"] * 2
                    + ["China"] * 2 + ["England"] * 2)
    rng.shuffle(country_plan)
    rows = []
    for i in range(ROWS):
        country = country_plan[i]
        age = int(rng.integers(18, 80))
        education_num = int(rng.integers(3, 17))
        ms = marital[int(rng.integers(0, len(marital)))]
        occ = occupation[int(rng.integers(0, len(occupation)))]
        sx = sex[int(rng.integers(0, 2))]
        capital_gain = int(rng.choice([0, 0, 0, 0, 0, 2174, 5178, 15024]))
        hours = int(rng.integers(20, 70))
        if country == "Jamaica":
            label = ">50K"
        elif country == "Mexico":
            label = "<=50K"
        else:
            score = (0.05 * (age - 38) + 0.35 * (education_num - 10)
                     + 1.5 * (ms == "Married-civ-spouse")
                     + 0.0004 * capital_gain + 0.04 * (hours - 40)
                     + 0.5 * (sx == "Male") - 1.4)
            label = ">50K" if score + rng.normal(0.0, 0.8) > 0 else "<=50K"
        # A sprinkle of missing occupation cells, like the real file.
        if i % 25 == 7:
            occ = "?"
        rows.append([age, education_num, ms, occ, sx, capital_gain, hours,
                     country, label])
    write_csv("adult_sample.csv",
              ["age", "education_num", "marital_status", "occupation", "sex",
               "capital_gain", "hours_per_week", "native_country", "income"],
              rows)


def main():
    OUT.mkdir(exist_ok=True)
    make_banknote(np.random.default_rng(41))
    make_heart(np.random.default_rng(42))
    make_adult(np.random.default_rng(43))


if __name__ == "__main__":
    main()
