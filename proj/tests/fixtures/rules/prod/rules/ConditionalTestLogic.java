package rules;

public class ConditionalTestLogic {
    public String describe() {
        return "ConditionalTestLogic";
    }
}
