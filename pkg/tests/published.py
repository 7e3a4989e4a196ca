"""Published error tables, keyed for lookup by the acceptance tests.

Each entry maps a row label to the five column values.
"""

STEPS = (5, 10, 20, 40, 80)
GRIDS = (25, 50, 100, 200, 400)
ALPHAS = (0.1, 0.3, 0.5, 0.7, 0.9)

# (row-group value, quantity) -> values over the table columns; the row groups
# vary theta in tables 1-2 and sigma in tables 3-4
GROUP_PARAM = {1: "theta", 2: "theta", 3: "sigma", 4: "sigma"}
TABLE_1 = {
    (1.0, "eps"): (0.0120292, 0.0066811, 0.0035420, 0.0018307, 0.0009359),
    (1.0, "eps_A"): (0.1362146, 0.0756551, 0.0401086, 0.0207297, 0.0105974),
    (0.5, "eps"): (0.0255692, 0.0148685, 0.0081424, 0.0042856, 0.0022062),
    (0.5, "eps_A"): (0.2869894, 0.1671826, 0.0916372, 0.0482531, 0.0248449),
}
TABLE_2 = {
    (1.0, "eps"): (0.0014351, 0.0004130, 0.0001236, 0.0000484, 0.0000296),
    (1.0, "eps_A"): (0.0162505, 0.0046760, 0.0013988, 0.0005462, 0.0003309),
    (0.5, "eps"): (0.0026070, 0.0008303, 0.0002392, 0.0000720, 0.0000287),
    (0.5, "eps_A"): (0.0295158, 0.0094001, 0.0027076, 0.0008137, 0.0003206),
}
TABLE_3 = {
    (1.0, "eps"): (0.0010624, 0.0009504, 0.0009359, 0.0009387, 0.0009426),
    (1.0, "eps_A"): (0.0119476, 0.0107503, 0.0105974, 0.0106319, 0.0106768),
    (0.5, "eps"): (0.0002321, 0.0000600, 0.0000172, 0.0000066, 0.0000400),
    (0.5, "eps_A"): (0.0025009, 0.0006511, 0.0001888, 0.0000737, 0.0000452),
}
TABLE_4 = {
    (1.0, "eps"): (0.0009628, 0.0012876, 0.0009359, 0.0005621, 0.0003062),
    (1.0, "eps_A"): (0.0109020, 0.0145807, 0.0105974, 0.0063651, 0.0034674),
    (0.5, "eps"): (0.0000925, 0.0000277, 0.0000172, 0.0000090, 0.0000045),
    (0.5, "eps_A"): (0.0002772, 0.0003097, 0.0001888, 0.0000950, 0.0000433),
}
# splitting tables: (quantity, component)
TABLE_5 = {
    ("eps", 1): (0.0084773, 0.0032158, 0.0012451, 0.0005118, 0.0002210),
    ("eps_A", 1): (0.0959950, 0.0364151, 0.0140991, 0.0057948, 0.0025025),
    ("eps", 2): (0.0251082, 0.0080231, 0.0029405, 0.0012031, 0.0005301),
    ("eps_A", 2): (0.2843178, 0.0908516, 0.0332978, 0.0136229, 0.0060020),
}
TABLE_6 = {
    ("eps", 1): (0.0063711, 0.0045436, 0.0019529, 0.0007352, 0.0002820),
    ("eps_A", 1): (0.0682378, 0.0503844, 0.0215774, 0.0079984, 0.0029949),
    ("eps", 2): (0.1398605, 0.0399402, 0.0130816, 0.0049608, 0.0020928),
    ("eps_A", 2): (1.5835471, 0.4521733, 0.1480800, 0.0561468, 0.0236847),
}
