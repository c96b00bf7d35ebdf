from knotbound.cli import main

main()
