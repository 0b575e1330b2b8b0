"""Probe rows for the good / middle / bad TID2013 groups: (image, MOS, SSIM, LF-SSIM)."""

GOOD = [
    ("i01_02_2.bmp", 6.10811, 0.994849, 0.9279),
    ("i03_08_1.bmp", 6.34211, 0.997039, 0.9453),
    ("i04_02_1.bmp", 6.275, 0.992736, 0.9148),
    ("i05_16_1.bmp", 6.15, 0.993907, 0.9219),
    ("i07_09_1.bmp", 6.42222, 0.990429, 0.9021),
    ("i23_16_1.bmp", 6.33333, 0.997993, 0.9542),
    ("i03_16_1.bmp", 6.82051, 0.9969, 0.9444),
    ("i12_16_1.bmp", 6.52632, 0.998817, 0.9654),
    ("i24_02_1.bmp", 6.44444, 0.996225, 0.9384),
    ("i08_04_1.bmp", 6.06452, 0.99915, 0.9709),
]
MIDDLE = [
    ("i01_02_4.bmp", 4.71429, 0.980467, 0.86),
    ("i01_17_3.bmp", 4.08108, 0.963197, 0.8082),
    ("i03_04_4.bmp", 4.6, 0.978184, 0.8521),
    ("i03_08_3.bmp", 4.47368, 0.970649, 0.8286),
    ("i04_17_3.bmp", 4.78049, 0.974127, 0.8391),
    ("i05_01_3.bmp", 4.84615, 0.979057, 0.8551),
    ("i05_02_5.bmp", 4.25641, 0.978483, 0.8531),
    ("i05_19_3.bmp", 4.225, 0.983719, 0.8724),
    ("i07_06_2.bmp", 4.61364, 0.973127, 0.836),
    ("i23_04_5.bmp", 4.52941, 0.975796, 0.8442),
]
BAD = [
    ("i03_09_5.bmp", 2.47368, 0.809075, 0.563),
    ("i20_10_5.bmp", 2.74359, 0.871029, 0.6409),
    ("i09_07_5.bmp", 2.70968, 0.848929, 0.6113),
    ("i06_07_5.bmp", 2.68571, 0.887359, 0.6643),
    ("i25_10_4.bmp", 2.14706, 0.928, 0.7317),
    ("i08_07_5.bmp", 2.3871, 0.883728, 0.659),
    ("i13_15_1.bmp", 2.73171, 0.945102, 0.7657),
    ("i18_22_4.bmp", 2.95238, 0.912675, 0.7044),
    ("i08_03_4.bmp", 2.96875, 0.877367, 0.6498),
    ("i25_22_5.bmp", 2.79412, 0.901483, 0.686),
]

# published "avg" rows: (MOS, SSIM, LF-SSIM)
AVERAGES = {
    "good": (6.348656, 0.995805, 0.93853),
    "middle": (4.512015, 0.975681, 0.84488),
    "bad": (2.659378, 0.886475, 0.66761),
}
TABLES = {"good": GOOD, "middle": MIDDLE, "bad": BAD}

# quoted resolutions, (MOS, SSIM, LF-SSIM)
RESOLUTIONS = {
    "good-middle": (0.2296, 0.0201, 0.0936),
    "middle-bad": (0.2316, 0.0892, 0.1773),
}

# PLCC with MOS on tid2013: metric -> (raw, LF)
TID2013_PLCC = {
    "ssim": (0.7596, 0.7746),
    "iw-ssim": (0.7638, 0.8172),
    "fsim": (0.8195, 0.8408),
    "fsimc": (0.8322, 0.8749),
    "ms_ssim": (0.7773, 0.8145),
    "vsi": (0.8373, 0.8957),
    "spsim": (0.8468, 0.9092),
    "gmsd": (0.8031, 0.8542),
    "efs": (0.8431, 0.9011),
}
