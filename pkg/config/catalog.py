"""
Catalog of the shipped example quantum groups.
Each entry names how the example is built and what its decomposition must look like.
"""

# kind: "function" = C(G), "group_algebra" = C[G], "data" = no recipe, the shipped file is
# the only source (the 8-dimensional Kac-Paljutkin quantum group)
# group: (family, parameter) understood by src.utils.groups.named_group
EXAMPLES = {
    "c_z2": {"kind": "function", "group": ("cyclic", 2), "file": "c_z2.qg"},
    "c_z4": {"kind": "function", "group": ("cyclic", 4), "file": "c_z4.qg"},
    "c_s3": {"kind": "function", "group": ("symmetric", 3), "file": "c_s3.qg"},
    "group_z2": {"kind": "group_algebra", "group": ("cyclic", 2), "file": "group_z2.qg"},
    "group_z3": {"kind": "group_algebra", "group": ("cyclic", 3), "file": "group_z3.qg"},
    "group_s3": {"kind": "group_algebra", "group": ("symmetric", 3), "file": "group_s3.qg"},
    "kac_paljutkin": {"kind": "data", "group": None, "file": "kac_paljutkin.qg"},
}

# Block dimensions of the dual, in canonical order (n ascending)
EXPECTED_BLOCKS = {
    "c_z2": [1, 1],
    "c_z4": [1, 1, 1, 1],
    "c_s3": [1, 1, 2],
    "group_z2": [1, 1],
    "group_z3": [1, 1, 1],
    "group_s3": [1, 1, 1, 1, 1, 1],
    "kac_paljutkin": [1, 1, 1, 1, 2],
}

# Order of the intrinsic group (number of 1-dimensional blocks)
EXPECTED_INTRINSIC_ORDER = {
    "c_z2": 2,
    "c_z4": 4,
    "c_s3": 2,
    "group_z2": 2,
    "group_z3": 3,
    "group_s3": 6,
    "kac_paljutkin": 4,
}

# Idempotent states the search must find where the search is exhaustive
EXPECTED_STATE_COUNTS = {
    "group_z2": 2,
    "group_s3": 6,
    "c_z4": 3,
    "c_s3": 6,
}

# Covector, action and hull files shipped next to the definitions
AUX_FILES = {
    "group_s3_a3.cov": "indicator of A3 on C[S3]",
    "group_s3_transposition.cov": "indicator of the subgroup {e, (01)} on C[S3]",
    "group_z2_haar.cov": "Haar state of C[Z2]",
    "group_z2_gen.cov": "generator (1, 0) of a principal ideal in L1(C[Z2])",
    "group_z2_counit.cov": "counit of C[Z2]",
    "group_z2_zero.cov": "zero functional on C[Z2]",
    "z2_trivial.act": "trivial action of Z2",
    "z3_inversion.act": "Z2 acting on C[Z3] by inversion",
}
