import sys

from ._core import cli_main


def main(argv=None):
    code, out, err = cli_main(list(sys.argv[1:] if argv is None else argv))
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
