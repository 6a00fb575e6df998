import warnings

warnings.filterwarnings("ignore", message=".*TBB.*")
warnings.filterwarnings("ignore", message=".*tbb.*")
