import logging
import sys

from application import run

# 設置日誌記錄器
logger = logging.getLogger(__name__)


def main():
    try:
        sys.exit(run(sys.argv[1:]))
    except KeyboardInterrupt:
        logger.error("已中斷")
        sys.exit(130)


if __name__ == "__main__":
    main()
