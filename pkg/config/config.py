import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    # Logging
    LOG_LEVEL = os.environ.get('XBOW_LOG_LEVEL', 'INFO')
    LOG_FILE = os.environ.get('XBOW_LOG_FILE', '')

    # Codebook generation
    DEFAULT_CODEBOOK_SIZE = int(os.environ.get('XBOW_CODEBOOK_SIZE', '500'))
    DEFAULT_CODEBOOK_METHOD = os.environ.get('XBOW_CODEBOOK_METHOD', 'random++')
    DEFAULT_SEED = int(os.environ.get('XBOW_SEED', '0'))
    KMEANS_MAX_ITERATIONS = int(os.environ.get('XBOW_KMEANS_MAX_ITERATIONS', '500'))

    # Quantization
    DEFAULT_ASSIGNMENTS = 1
    DEFAULT_GAUSSIAN_SIGMA = float(os.environ.get('XBOW_GAUSSIAN_SIGMA', '1.0'))
    DISTANCE_CHUNK_ROWS = int(os.environ.get('XBOW_DISTANCE_CHUNK_ROWS', '2048'))

    # Text
    DEFAULT_NGRAM = 1
    DEFAULT_NCHARGRAM = 0
    DEFAULT_MIN_TERM_FREQ = 1
    DEFAULT_MAX_TERM_FREQ = 2 ** 62

    # File formats
    CSV_SEPARATOR = ';'
    CODEBOOK_FORMAT_VERSION = 'v1'
    ARFF_RELATION = 'xbow'


class DevelopmentConfig(Config):
    LOG_LEVEL = 'DEBUG'


class TestingConfig(Config):
    LOG_LEVEL = 'WARNING'


class ProductionConfig(Config):
    LOG_LEVEL = 'WARNING'


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': Config
}


def get_config():
    """Return the config class selected by XBOW_ENV"""
    return config.get(os.environ.get('XBOW_ENV', 'default'), Config)
