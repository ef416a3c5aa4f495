# DialecticKernel Source Package
