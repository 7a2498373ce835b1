package rules;

public class GeneralFixture {
    public String describe() {
        return "GeneralFixture";
    }
}
