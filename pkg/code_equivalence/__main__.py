from code_equivalence.cli import main
from code_equivalence.consts import PROG_NAME

main(prog_name=PROG_NAME)
