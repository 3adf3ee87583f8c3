from mvhac.cli import main

main()
